// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_RESOLVENT_HPP
#define DWLAB_RESOLVENT_HPP

#include <complex>
#include <limits>
#include <vector>

#include "dwlab/geodesic.hpp"
#include "dwlab/mode_operator.hpp"
#include "dwlab/scaling.hpp"
#include "dwlab/sigma.hpp"

namespace dwlab {

struct ResolventNorm {
  double norm = 0.0;
  double sigmaMin = 0.0;
  bool nearPole = false;  // sigma below 1e-14 * operator-norm bound
  bool usedDense = false;
  bool converged = true;
};

/// Operator norm of (M - z)^{-1} in the weighted space, as 1/sigma_min of the
/// weighted-symmetrized shifted matrix. Modified-kind operators carry their z
/// internally; call with z = 0 for those.
ResolventNorm resolvent_norm_detailed(const ModeOperator& op, Complex z,
                                      const SigmaOptions& opts = {});
double resolvent_norm(const ModeOperator& op, Complex z, const SigmaOptions& opts = {});

struct NormSample {
  OperatorKind kind = OperatorKind::Damped;
  double h = 0.0;
  Complex z{0.0, 0.0};
  int n = 0;
  double norm = 0.0;
  std::string cutoff = "none";
  bool nearPole = false;
};

struct GlobalNormOptions {
  double delta = 0.25;
  double bandFactor = 2.0;     // scan n up to ceil(bandFactor * maxWarp / h)
  double tailTolerance = 1.05; // monotone-decrease slack past the elliptic edge
  int resolutionOverride = 0;  // 0: policy resolution_for(h)
  int threads = 0;
  SigmaOptions sigma{SigmaOptions::Method::Iterative};
};

struct GlobalNormResult {
  double norm = 0.0;
  int argmaxN = 0;
  int nMax = 0;
  bool tailMonotone = true;  // truncation-suspect warning when false
  std::vector<NormSample> samples;
};

/// Max over angular modes n in [0, nMax] of the mode resolvent norm, with the
/// maximizing mode and the elliptic-tail monotonicity check that justifies the
/// truncation.
GlobalNormResult global_resolvent_norm(const WarpedSurface& surface, const ProfileSet& profiles,
                                       double h, Complex z, OperatorKind kind,
                                       const GlobalNormOptions& opts = {});

enum class CutoffSide { Right, Both };

/// Norm of R(z) diag(chi) (right) or diag(chi) R(z) diag(chi) (both) in the
/// weighted space. The cutoff must be supported away from the projected
/// trapped set whenever the report says one exists
/// (Error("invalid-cutoff") otherwise).
double cutoff_resolvent_norm(const ModeOperator& op, Complex z, CutoffSide side,
                             const Profile& cutoff, const TrappedSetReport& trapped,
                             const SigmaOptions& opts = {});

/// Max over modes of the cutoff norm (same truncation policy as the global norm).
GlobalNormResult global_cutoff_norm(const WarpedSurface& surface, const ProfileSet& profiles,
                                    double h, Complex z, OperatorKind kind, CutoffSide side,
                                    const Profile& cutoff, const TrappedSetReport& trapped,
                                    const GlobalNormOptions& opts = {});

struct TransferRow {
  double h = 0.0;
  double alphaH = 0.0;
  double dampedMax = 0.0;       // max over the real z samples
  double empiricalC = 0.0;      // dampedMax * h / alpha(h)
  double normImPlus = 0.0;      // at z = 1 + i c0 h / alpha
  double normImMinus = 0.0;     // at z = 1 - i c0 h / alpha
  double alphaSqOverH = 0.0;    // weak-mode comparison scale alpha^2/h
  int argmaxN = 0;
};

struct TransferReport {
  std::vector<TransferRow> rows;
  ScalingFit dampedFit;     // power fit of dampedMax against h
  ScalingFit absorbingFit;  // the fit the alphas came from
  double spreadC = 0.0;     // max/min of empiricalC over h
  bool bounded = false;
  double boundFactor = 10.0;
};

/// Damping-vs-absorption transfer check: computes damped global norms on the
/// real window and at Im z = +-c0 h/alpha(h), reports the empirical constant
/// C(h) = damped * h / alpha(h) and whether it stays within boundFactor.
TransferReport verify_transfer(const WarpedSurface& surface, const ProfileSet& profiles,
                               const std::vector<double>& hList, double delta, double c0,
                               const ScalingFit& absorbingFit, double boundFactor = 10.0,
                               const GlobalNormOptions& opts = {});

struct StripScanOptions {
  double delta = 0.25;
  int nRe = 5;
  int sweepSteps = 20;     // logarithmic c0 sweep; grid Im levels reuse the sweep
  double c0Max = 2.0;
  double c0MinFactor = 0.02;  // sweep starts at c0Max * c0MinFactor
  double bandLow = 0.55;      // full z-grid for modes with hn >= bandLow * minWarp
  double tailFactor = 1.3;    // scan modes up to ceil(tailFactor * maxWarp / h)
  int gapProbes = 4;          // on-axis inverse-iteration seeds per mode (damped)
  int resolutionOverride = 0;
  int threads = 0;
  SigmaOptions sigma{SigmaOptions::Method::Iterative};
};

struct StripScanResult {
  OperatorKind kind = OperatorKind::Damped;
  double h = 0.0;
  double alphaH = 1.0;
  std::vector<double> c0Sweep;
  std::vector<double> minScaledSigma;  // min over the strip of sigma * alpha/h
  double c0MaxGrid = 0.0;              // largest sweep c0 the grid calls spectrum-free
  double gapImMin = std::numeric_limits<double>::infinity();  // damped: min Im of located spectrum
  double c0MaxGap = 0.0;               // gapImMin * alpha/h
  std::vector<Complex> spectrum;       // located eigenvalues near the window
  double lowerHalfMargin = 0.0;        // absorbing: min over Im<0 row of sigma/|Im z|
};

/// Scans z on a rectangle grid in the strip [1-delta, 1+delta] +
/// i[-c0, c0] h/alpha(h) (modified kind: the shrinking window
/// [1 -+ c0/alpha] + i[-c0, c0] h/alpha) and reports the scaled sigma floor per
/// sweep c0. For the damped kind the spectral gap is located by inverse
/// iteration and reported as the empirical largest spectrum-free c0.
StripScanResult strip_scan(const WarpedSurface& surface, const ProfileSet& profiles, double h,
                           const ScalingFit& alphaFit, OperatorKind kind,
                           const StripScanOptions& opts = {});

struct ControlChainReport {
  double h = 0.0;
  Complex z{1.0, 0.0};
  int mode = 0;
  struct Sample {
    double c1 = 0.0;    // ||B1 u|| <= (alpha/h)||B1 f|| + c1 sqrt(alpha)||phi u||
    double c2B = 0.0;   // ||(1-B1) u|| <= c2B (||f||/h + ||chi u||)
    double c2Phi = 0.0; // ||phi u||    <= c2Phi (||f||/h + ||chi u||)
    double c3 = 0.0;    // ||chi u||^2  <= (c3/h) ||f|| ||u||
  };
  std::vector<Sample> samples;
  Sample maxima;
};

/// Empirical constants of the control-inequality chain on u = (P-z)^{-1} f for
/// random and bump-localized f (z real in the window).
ControlChainReport verify_control_chain(const WarpedSurface& surface, const ProfileSet& profiles,
                                        double h, Complex z, int nSamples, double alphaH,
                                        std::uint64_t seed, int modeOverride = -1,
                                        int resolutionOverride = 0);

}  // namespace dwlab

#endif
