// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/decay_calculus.hpp"

#include <algorithm>
#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

ResolventGrowth alpha_to_G_P(const ScalingFit& alphaFit, double stripConstant,
                             double weakModeThreshold) {
  if (stripConstant <= 0.0)
    throw Error("invalid-parameter", "strip constant must be positive");
  ResolventGrowth g;
  const double c = stripConstant;
  if (alphaFit.model == ScalingFit::Model::Log) {
    const double C = alphaFit.coeff;
    g.G = [C](double r) { return std::max(1.0, C * std::log(2.0 + r)); };
    g.PofLog = [c, C](double logR) {
      const double lg = logR < 30.0 ? std::log(2.0 + std::exp(logR)) : logR;
      return c / std::max(1.0, C * lg);
    };
    g.N = 0.0;
    g.shape = "log";
  } else {
    // alpha(h) ~ C h^{alphaExponent} with alphaExponent <= 0 under trapping,
    // so G(r) = alpha(1/r) grows like r^e with e = -alphaExponent.
    const double e = std::max(0.0, -alphaFit.alphaExponent());
    const double C = alphaFit.coeff;
    if (e > weakModeThreshold) g.weakMode = true;
    const double eEff = g.weakMode ? 2.0 * e : e;
    const double cEff = g.weakMode ? C * C : C;
    if (eEff <= 1e-9) {
      g.G = [cEff](double) { return std::max(1.0, cEff); };
      g.PofLog = [c, cEff](double) { return c / std::max(1.0, cEff); };
      g.shape = "constant";
    } else {
      g.G = [cEff, eEff](double r) { return std::max(1.0, cEff * std::pow(r, eEff)); };
      g.PofLog = [c, cEff, eEff](double logR) {
        return c / std::max(1.0, cEff * std::exp(std::min(700.0, eEff * logR)));
      };
      g.shape = "power";
    }
    g.N = eEff;
  }
  const auto pol = g.PofLog;
  g.P = [pol](double r) { return pol(std::log(std::max(r, 1e-300))); };
  return g;
}

double fcond_residual_log(double t, double logF, int k,
                          const std::function<double(double)>& PofLog) {
  return 0.5 * (k + 1) * logF - t * PofLog(logF);
}

double fcond_residual(double t, double F, int k, const std::function<double(double)>& P) {
  return 0.5 * (k + 1) * std::log(F) - t * P(F);
}

double DecayProfile::valueF(size_t i) const {
  return std::exp(std::min(logF[i], 700.0));
}

double DecayProfile::energyBound(double tQuery, double s) const {
  if (t.empty()) throw Error("invalid-parameter", "empty decay profile");
  if (s <= 0.0 || s > k) throw Error("invalid-parameter", "s must lie in (0, k]");
  const double tc = std::clamp(tQuery, t.front(), t.back());
  const auto it = std::lower_bound(t.begin(), t.end(), tc);
  size_t i1 = std::min<size_t>(t.size() - 1, static_cast<size_t>(it - t.begin()));
  if (i1 == 0) i1 = 1;
  const size_t i0 = i1 - 1;
  const double w = (std::log(tc) - std::log(t[i0])) / (std::log(t[i1]) - std::log(t[i0]));
  const double lf = (1.0 - w) * logF[i0] + w * logF[i1];
  return std::exp(std::max(-700.0, -s * lf));
}

DecayProfile rate_from_resolvent(const ResolventGrowth& growth, int k, double tMin, double tMax,
                                 int points) {
  if (k <= growth.N + 1.0)
    throw Error("regularity-insufficient",
                "need integer k > N + 1 (N = " + std::to_string(growth.N) + ")");
  if (!(tMin > 0.0 && tMax > tMin) || points < 2)
    throw Error("invalid-parameter", "bad t-grid for the decay profile");

  DecayProfile prof;
  prof.k = k;
  prof.N = growth.N;
  prof.shape = growth.shape;
  prof.t.resize(points);
  prof.logF.resize(points);

  const double half = 0.5 * (k + 1);
  double prevLogF = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = tMin * std::pow(tMax / tMin, i / (points - 1.0));
    prof.t[i] = t;
    // Solve half*logF = t PofLog(logF) by bisection; the left side increases
    // and the right side does not (P monotone nonincreasing), so the crossing
    // is unique and the previous logF brackets it from below.
    double lo = prevLogF;
    double hi = std::max(1.0, lo + 1.0);
    auto g = [&](double logF) { return half * logF - t * growth.PofLog(logF); };
    while (g(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0.0 ? lo : hi) = mid;
    }
    prof.logF[i] = lo;  // the feasible side of the saturation
    prevLogF = lo;
  }

  prof.maxResidual = -1e300;
  for (int i = 0; i < points; ++i)
    prof.maxResidual = std::max(
        prof.maxResidual, fcond_residual_log(prof.t[i], prof.logF[i], k, growth.PofLog));
  const double tol = 1e-12 * std::max(1.0, std::fabs(prof.maxResidual));
  if (prof.maxResidual > tol)
    throw Error("fcond-violated", "saturating profile failed its own inequality");
  return prof;
}

}  // namespace dwlab
