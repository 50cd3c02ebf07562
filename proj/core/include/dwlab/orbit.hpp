// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_ORBIT_HPP
#define DWLAB_ORBIT_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dwlab/geodesic.hpp"

namespace dwlab {

/// Closed-geodesic data at the neck: transverse monodromy on (x, xi)
/// variations over one period, Lyapunov exponent, eigendirections.
struct OrbitAnalysis {
  double pLevel = 1.0;
  double eta = 1.0;
  double period = 0.0;
  Eigen::Matrix2d monodromy = Eigen::Matrix2d::Identity();
  double detMonodromy = 1.0;
  double lambda = 0.0;          // log(spectral radius)/period; 0 when degenerate
  bool degenerate = false;      // parabolic linearization (m >= 2)
  Eigen::Vector2d unstableDir = Eigen::Vector2d::Zero();
  Eigen::Vector2d stableDir = Eigen::Vector2d::Zero();
};

/// Monodromy of the closed geodesic x = 0, xi = 0, eta = A(0) sqrt(p); the
/// period is pi A(0)^2/eta (theta advances 2 pi at rate 2 eta/A^2).
OrbitAnalysis monodromy_analysis(const WarpedSurface& surface, double pLevel = 1.0,
                                 double dt = 1e-4);

/// Same, but for a caller-supplied closed orbit; throws
/// Error("non-closed-orbit") when flow(state, period) does not return.
OrbitAnalysis monodromy_analysis(const WarpedSurface& surface, const GeodesicState& state,
                                 double period, double dt = 1e-4);

/// Unstable Jacobian J_t^u at an orbit point: determinant ratio of the
/// backward differential on the weak-unstable plane (flow + unstable
/// directions), volumes measured with the Euclidean chart metric.
/// Throws Error("unsupported-degenerate") when the orbit is not hyperbolic.
double unstable_jacobian(const WarpedSurface& surface, const OrbitAnalysis& orbit,
                         const GeodesicState& rho, double t, double dt = 1e-4);

/// Convenience overload at the canonical orbit point (x=0, theta=0).
double unstable_jacobian(const WarpedSurface& surface, const OrbitAnalysis& orbit, double t,
                         double dt = 1e-4);

using PhaseFunction = std::function<double(const GeodesicState&)>;

/// Pressure of f on a single closed orbit: the Birkhoff average (1/T) \oint f dt
/// (a one-orbit invariant set carries zero entropy).
double pressure_orbit(const WarpedSurface& surface, const OrbitAnalysis& orbit,
                      const PhaseFunction& f, int quadSamples = 256);

struct PressureEstimate {
  struct PerEps {
    double eps = 0.0;
    int separatedCount = 0;           // at the largest n
    std::vector<int> nValues;
    std::vector<double> prAtN;        // (1/n) log Z_{n,eps}
    double extrapolated = 0.0;        // 1/n -> 0 limit by linear extrapolation
  };
  std::vector<PerEps> perEps;
  double value = 0.0;  // extrapolated value at the smallest eps
  bool greedyLowerBound = true;  // separated-set supremum approximated greedily
};

/// Separated-set pressure estimator over a finite sample of an invariant set:
/// greedy maximal (eps, n)-separated subsets under the Bowen metric of the
/// time-one flow map, Richardson-extrapolated in n for each eps.
/// Throws Error("empty-sample-set") when samples is empty.
PressureEstimate pressure_separated(const WarpedSurface& surface,
                                    const std::vector<GeodesicState>& samples,
                                    const PhaseFunction& f, const std::vector<int>& nValues,
                                    const std::vector<double>& epsValues, double dt = 1e-3);

struct StableManifoldRow {
  GeodesicState start;
  bool inward = false;
  double minDist = 0.0;   // min over [0, tMax] of dist((x, xi), (0, 0))
  double tAtMin = 0.0;
  double finalDist = 0.0;
  bool escaped = false;   // reached |x| > 0.5
  double tEscape = 0.0;
};

struct StableManifoldReport {
  std::vector<StableManifoldRow> rows;
};

/// Flows the given states for tMax and records approach to the trapped circle
/// (x, xi) = (0, 0) and escape past |x| > 0.5.
StableManifoldReport stable_manifold_check(const WarpedSurface& surface,
                                           const std::vector<GeodesicState>& states,
                                           double tMax = 20.0, double dt = 1e-4);

/// On-set state of the peanut stable/unstable set xi^2 + eta^2/cosh^2 u = eta^2
/// at position u with eta fixing the p-level; inward = true picks the branch
/// converging to the neck.
GeodesicState peanut_invariant_state(double u, double eta, bool inward);

}  // namespace dwlab

#endif
