// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/geodesic.hpp"

#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

struct Deriv {
  double dx, dtheta, dxi;
};

inline Deriv hamilton_rhs(const GeodesicState& s, const WarpedSurface& surface) {
  const WarpEval we = surface.warp(s.x);
  const double A = we.A;
  return {2.0 * s.xi, 2.0 * s.eta / (A * A), 2.0 * s.eta * s.eta * we.dA / (A * A * A)};
}

inline GeodesicState advance(const GeodesicState& s, const Deriv& d, double dt) {
  GeodesicState out = s;
  out.x += dt * d.dx;
  out.theta += dt * d.dtheta;
  out.xi += dt * d.dxi;
  return out;
}

inline GeodesicState rk4_step(const GeodesicState& s, double dt, const WarpedSurface& surface) {
  const Deriv k1 = hamilton_rhs(s, surface);
  const Deriv k2 = hamilton_rhs(advance(s, k1, 0.5 * dt), surface);
  const Deriv k3 = hamilton_rhs(advance(s, k2, 0.5 * dt), surface);
  const Deriv k4 = hamilton_rhs(advance(s, k3, dt), surface);
  GeodesicState out = s;
  out.x += dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.theta += dt / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta);
  out.xi += dt / 6.0 * (k1.dxi + 2.0 * k2.dxi + 2.0 * k3.dxi + k4.dxi);
  return out;
}

}  // namespace

double momentum_p(const GeodesicState& s, const WarpedSurface& surface) {
  const double A = surface.warpValue(s.x);
  return s.xi * s.xi + s.eta * s.eta / (A * A);
}

GeodesicState unit_state(const WarpedSurface& surface, double x, double psi, double theta) {
  GeodesicState s;
  s.x = wrap_to_cell(x);
  s.theta = theta;
  s.xi = std::cos(psi);
  s.eta = surface.warpValue(x) * std::sin(psi);
  return s;
}

GeodesicState flow(GeodesicState s, double t, const WarpedSurface& surface,
                   const FlowOptions& opts, Trajectory* trajectory, int storeEvery) {
  const double p0 = momentum_p(s, surface);
  // Faster states get proportionally smaller steps: dt <= 1e-3 / max(1, |xi|+|eta|).
  const double speed = std::fabs(s.xi) + std::fabs(s.eta);
  const double dt_mag = std::min(opts.dt, 1e-3 / std::max(1.0, speed));
  const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(t) / dt_mag)));
  const double dt = t / steps;

  if (trajectory) {
    trajectory->t.push_back(0.0);
    trajectory->states.push_back(s);
  }
  for (int k = 1; k <= steps; ++k) {
    s = rk4_step(s, dt, surface);
    s.x = wrap_to_cell(s.x);
    if (trajectory && (k % storeEvery == 0 || k == steps)) {
      trajectory->t.push_back(k * dt);
      trajectory->states.push_back(s);
    }
  }
  if (opts.checkDrift) {
    const double drift = std::fabs(momentum_p(s, surface) - p0);
    const double budget = opts.driftBudgetPerTime * std::max(1.0, std::fabs(t)) *
                          std::max(1.0, p0);
    if (drift > budget)
      throw Error("step-size-rejection",
                  "momentum drift " + std::to_string(drift) + " exceeds budget " +
                      std::to_string(budget));
  }
  return s;
}

UndampedClass classify_undamped(const GeodesicState& s0, const Profile& damping,
                                const WarpedSurface& surface, double tMax, double threshold,
                                double dt) {
  UndampedClass out;
  double integral = 0.0;
  bool hit = false;
  for (int dir : {+1, -1}) {
    GeodesicState s = s0;
    const int steps = static_cast<int>(std::ceil(tMax / dt));
    double a_prev = damping(s.x);
    for (int k = 1; k <= steps; ++k) {
      s = rk4_step(s, dir * dt, surface);
      s.x = wrap_to_cell(s.x);
      const double a_here = damping(s.x);
      integral += 0.5 * (a_prev + a_here) * dt;
      a_prev = a_here;
      if (!hit && a_here > threshold) {
        hit = true;
        out.tHit = k * dt;
        out.hitDirection = dir;
      }
    }
    if (hit) break;
  }
  out.dampIntegral = integral;
  out.undamped = integral < threshold * tMax * 1e-6;
  return out;
}

GccResult gcc_time(const WarpedSurface& surface, const Profile& damping, int nx, int ndir,
                   double tMax, double threshold, bool offsetDirections) {
  GccResult res;
  res.bounded = true;
  const double dt = 1e-3;
  for (int i = 0; i <= nx; ++i) {
    const double x = -1.0 + 2.0 * i / nx;  // includes the neck when nx is even
    for (int j = 0; j < ndir; ++j) {
      const double psi = 2.0 * M_PI * (j + (offsetDirections ? 0.5 : 0.0)) / ndir;
      GeodesicState s = unit_state(surface, x, psi);
      ++res.samples;
      if (damping(s.x) > threshold) continue;  // hit at t = 0
      bool found = false;
      const int steps = static_cast<int>(std::ceil(tMax / dt));
      for (int k = 1; k <= steps; ++k) {
        s = rk4_step(s, dt, surface);
        s.x = wrap_to_cell(s.x);
        if (damping(s.x) > threshold) {
          res.T0 = std::max(res.T0, k * dt);
          found = true;
          break;
        }
      }
      if (!found) {
        res.bounded = false;
        ++res.undampedCount;
      }
    }
  }
  return res;
}

TrappedSetReport trapped_set_report(const WarpedSurface& surface, const Profile& damping,
                                    int nx, double tMax, double threshold) {
  TrappedSetReport rep;
  for (int i = 0; i < nx; ++i) {
    const double x = -1.0 + 2.0 * i / (nx - 1.0);
    const GeodesicState s = unit_state(surface, x, 0.5 * M_PI);
    if (damping(x) > threshold) continue;
    const UndampedClass c = classify_undamped(s, damping, surface, tMax, threshold);
    if (c.undamped) {
      rep.nonEmpty = true;
      rep.undampedX.push_back(x);
      rep.projectionRadius = std::max(rep.projectionRadius, std::fabs(x));
    }
  }
  return rep;
}

}  // namespace dwlab
