// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_GEODESIC_HPP
#define DWLAB_GEODESIC_HPP

#include <optional>
#include <vector>

#include "dwlab/geometry.hpp"

namespace dwlab {

/// Point of T*X in the (x, theta, xi, eta) chart. eta is the Clairaut
/// invariant (exactly conserved: theta is ignorable).
struct GeodesicState {
  double x = 0.0;
  double theta = 0.0;
  double xi = 0.0;
  double eta = 0.0;
};

/// p = xi^2 + eta^2 / A(x)^2, conserved along the flow.
double momentum_p(const GeodesicState& s, const WarpedSurface& surface);

/// State on the unit cosphere at position x with launch angle psi
/// (psi = 0: along x; psi = pi/2: tangential).
GeodesicState unit_state(const WarpedSurface& surface, double x, double psi, double theta = 0.0);

struct FlowOptions {
  double dt = 1e-3;
  double driftBudgetPerTime = 1e-9;  // allowed |p(t)-p(0)| per unit time
  bool checkDrift = true;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<GeodesicState> states;
};

/// Fixed-step RK4 for xdot = 2 xi, thetadot = 2 eta/A^2, xidot = 2 eta^2 A'/A^3,
/// etadot = 0. Throws Error("step-size-rejection") if the p drift exceeds the
/// budget. Negative t integrates backwards.
GeodesicState flow(GeodesicState s, double t, const WarpedSurface& surface,
                   const FlowOptions& opts = {}, Trajectory* trajectory = nullptr,
                   int storeEvery = 1);

struct UndampedClass {
  bool undamped = false;
  double tHit = 0.0;        // first |t| with a(x(t)) > threshold (either direction)
  int hitDirection = 0;     // +1 forward, -1 backward, 0 none
  double dampIntegral = 0.0;
};

/// Integrates the damping seen along the orbit over [-tMax, tMax];
/// undamped when the integral stays below threshold * tMax * 1e-6.
UndampedClass classify_undamped(const GeodesicState& s, const Profile& damping,
                                const WarpedSurface& surface, double tMax, double threshold,
                                double dt = 1e-3);

struct GccResult {
  bool bounded = false;
  double T0 = 0.0;  // max forward hitting time over the sample grid
  int samples = 0;
  int undampedCount = 0;
};

/// Samples S*X on an (x, direction) grid and reports the max forward time to
/// reach {a > threshold}, or unbounded if any sample never does. By default
/// the grid contains the exact tangential directions (so a trapped neck orbit
/// is seen); offsetDirections = true shifts directions by half a step, the
/// convention under which every sampled speed is bounded away from zero and
/// the flat-torus control time stays finite.
GccResult gcc_time(const WarpedSurface& surface, const Profile& damping, int nx, int ndir,
                   double tMax, double threshold = 1e-6, bool offsetDirections = false);

struct TrappedSetReport {
  bool nonEmpty = false;
  double projectionRadius = 0.0;  // undamped orbits project into |x| <= this
  std::vector<double> undampedX;  // sampled tangential launch points staying undamped
};

/// Tangential-launch scan for the projected undamped set.
TrappedSetReport trapped_set_report(const WarpedSurface& surface, const Profile& damping,
                                    int nx = 129, double tMax = 40.0, double threshold = 1e-6);

}  // namespace dwlab

#endif
