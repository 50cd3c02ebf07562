// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_DECAY_CALCULUS_HPP
#define DWLAB_DECAY_CALCULUS_HPP

#include <functional>
#include <string>
#include <vector>

#include "dwlab/scaling.hpp"

namespace dwlab {

/// Resolvent growth data for the first-order wave generator: G bounds the
/// resolvent norm by G(|Re lambda|), P is the spectrum-free strip-width
/// profile (monotone nonincreasing), N the power bound on G. Decay profiles
/// F(t) overflow doubles long before t = 1e6, so the strip profile is also
/// carried as PofLog(log F).
struct ResolventGrowth {
  std::function<double(double)> G;
  std::function<double(double)> P;       // of r
  std::function<double(double)> PofLog;  // of log r
  double N = 0.0;
  bool weakMode = false;  // alpha grows faster than any polynomial: alpha^2 route
  std::string shape;      // "constant" | "log" | "power"
};

/// Converts a fitted alpha(h) law into (G, P): G(r) = alpha(1/r),
/// P(r) = stripConstant / alpha(1/r). Power exponents above weakModeThreshold
/// trip the weak-mode flag and square the loss.
ResolventGrowth alpha_to_G_P(const ScalingFit& alphaFit, double stripConstant,
                             double weakModeThreshold = 8.0);

/// Log-domain residual of the decay condition: ((k+1)/2) log F - t P(F) with
/// P supplied as a function of log F. Nonpositive means
/// F(t)^{(k+1)/2} <= exp(t P(F(t))).
double fcond_residual_log(double t, double logF, int k,
                          const std::function<double(double)>& PofLog);

/// Same for moderate F given directly (overflows are the caller's problem).
double fcond_residual(double t, double F, int k, const std::function<double(double)>& P);

struct DecayProfile {
  int k = 2;
  double N = 0.0;
  std::vector<double> t;     // log-spaced grid
  std::vector<double> logF;  // log of the saturating profile
  double maxResidual = 0.0;  // max over the grid of the log-domain residual
  std::string shape;

  /// Interpolated energy bound F(t)^{-s}, s in (0, k].
  double energyBound(double tQuery, double s) const;
  /// F at a grid node, clamped against overflow.
  double valueF(size_t i) const;
};

/// Builds F by monotone bisection of the saturation
/// F(t)^{(k+1)/2} = exp(t P(F(t))) on a log-spaced grid. Requires the integer
/// regularity k > N + 1 (Error("regularity-insufficient") otherwise); the
/// returned profile is monotone increasing with residual <= 0 up to a 1e-12
/// relative saturation tolerance.
DecayProfile rate_from_resolvent(const ResolventGrowth& growth, int k, double tMin = 1.0,
                                 double tMax = 1e6, int points = 121);

}  // namespace dwlab

#endif
