// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/orbit.hpp"

#include <algorithm>
#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

double circ_dist(double d, double period) {
  d = std::fabs(std::fmod(d, period));
  return std::min(d, period - d);
}

double phase_dist(const GeodesicState& a, const GeodesicState& b) {
  const double dx = circ_dist(a.x - b.x, 2.0);
  const double dth = circ_dist(a.theta - b.theta, 2.0 * M_PI);
  const double dxi = a.xi - b.xi;
  const double deta = a.eta - b.eta;
  return std::sqrt(dx * dx + dth * dth + dxi * dxi + deta * deta);
}

struct Reduced {
  double x, xi;
  Eigen::Matrix2d Phi;
};

// RK4 on the (x, xi) block plus its variational matrix; eta is a parameter.
Reduced reduced_rk4(Reduced s, double T, double eta, const WarpedSurface& surface, double dt) {
  const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(T) / dt)));
  const double h = T / steps;
  auto rhs = [&](const Reduced& r, Reduced& d) {
    const WarpEval we = surface.warp(r.x);
    const double A = we.A;
    const double F = 2.0 * eta * eta * we.dA / (A * A * A);
    const double Fp = 2.0 * eta * eta *
                      (we.d2A / (A * A * A) - 3.0 * we.dA * we.dA / (A * A * A * A));
    d.x = 2.0 * r.xi;
    d.xi = F;
    Eigen::Matrix2d J;
    J << 0.0, 2.0, Fp, 0.0;
    d.Phi = J * r.Phi;
  };
  Reduced k1, k2, k3, k4, tmp;
  for (int i = 0; i < steps; ++i) {
    rhs(s, k1);
    tmp = {s.x + 0.5 * h * k1.x, s.xi + 0.5 * h * k1.xi, s.Phi + 0.5 * h * k1.Phi};
    rhs(tmp, k2);
    tmp = {s.x + 0.5 * h * k2.x, s.xi + 0.5 * h * k2.xi, s.Phi + 0.5 * h * k2.Phi};
    rhs(tmp, k3);
    tmp = {s.x + h * k3.x, s.xi + h * k3.xi, s.Phi + h * k3.Phi};
    rhs(tmp, k4);
    s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.xi += h / 6.0 * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi);
    s.Phi += h / 6.0 * (k1.Phi + 2.0 * k2.Phi + 2.0 * k3.Phi + k4.Phi);
  }
  return s;
}

struct Tangent4 {
  GeodesicState s;
  Eigen::Matrix<double, 4, 2> V;  // two carried tangent vectors
};

// RK4 for the full 4D flow and two tangent vectors; sign = -1 integrates the
// reversed field (backward differential).
Tangent4 tangent_rk4(Tangent4 st, double T, const WarpedSurface& surface, double dt,
                     double sign) {
  const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(T) / dt)));
  const double h = T / steps;
  auto rhs = [&](const Tangent4& r, Tangent4& d) {
    const WarpEval we = surface.warp(r.s.x);
    const double A = we.A;
    const double eta = r.s.eta;
    d.s.x = sign * 2.0 * r.s.xi;
    d.s.theta = sign * 2.0 * eta / (A * A);
    d.s.xi = sign * 2.0 * eta * eta * we.dA / (A * A * A);
    d.s.eta = 0.0;
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    J(0, 2) = 2.0;
    J(1, 0) = -4.0 * eta * we.dA / (A * A * A);
    J(1, 3) = 2.0 / (A * A);
    J(2, 0) = 2.0 * eta * eta * (we.d2A / (A * A * A) - 3.0 * we.dA * we.dA / (A * A * A * A));
    J(2, 3) = 4.0 * eta * we.dA / (A * A * A);
    d.V = sign * J * r.V;
  };
  auto advance = [](const Tangent4& a, const Tangent4& d, double w) {
    Tangent4 out = a;
    out.s.x += w * d.s.x;
    out.s.theta += w * d.s.theta;
    out.s.xi += w * d.s.xi;
    out.s.eta += w * d.s.eta;
    out.V += w * d.V;
    return out;
  };
  Tangent4 k1, k2, k3, k4;
  for (int i = 0; i < steps; ++i) {
    rhs(st, k1);
    rhs(advance(st, k1, 0.5 * h), k2);
    rhs(advance(st, k2, 0.5 * h), k3);
    rhs(advance(st, k3, h), k4);
    Tangent4 acc = st;
    acc.s.x += h / 6.0 * (k1.s.x + 2.0 * k2.s.x + 2.0 * k3.s.x + k4.s.x);
    acc.s.theta += h / 6.0 * (k1.s.theta + 2.0 * k2.s.theta + 2.0 * k3.s.theta + k4.s.theta);
    acc.s.xi += h / 6.0 * (k1.s.xi + 2.0 * k2.s.xi + 2.0 * k3.s.xi + k4.s.xi);
    acc.V += h / 6.0 * (k1.V + 2.0 * k2.V + 2.0 * k3.V + k4.V);
    st = acc;
  }
  return st;
}

Eigen::Vector4d hamilton_field(const GeodesicState& s, const WarpedSurface& surface) {
  const WarpEval we = surface.warp(s.x);
  const double A = we.A;
  Eigen::Vector4d v;
  v << 2.0 * s.xi, 2.0 * s.eta / (A * A), 2.0 * s.eta * s.eta * we.dA / (A * A * A), 0.0;
  return v;
}

double parallelogram_volume(const Eigen::Matrix<double, 4, 2>& V) {
  const double g11 = V.col(0).squaredNorm();
  const double g22 = V.col(1).squaredNorm();
  const double g12 = V.col(0).dot(V.col(1));
  return std::sqrt(std::max(0.0, g11 * g22 - g12 * g12));
}

}  // namespace

OrbitAnalysis monodromy_analysis(const WarpedSurface& surface, double pLevel, double dt) {
  const double A0 = surface.warpValue(0.0);
  GeodesicState s;
  s.eta = A0 * std::sqrt(pLevel);
  const double period = M_PI * A0 * A0 / s.eta;
  return monodromy_analysis(surface, s, period, dt);
}

OrbitAnalysis monodromy_analysis(const WarpedSurface& surface, const GeodesicState& state,
                                 double period, double dt) {
  const GeodesicState back = flow(state, period, surface, FlowOptions{dt, 1e-8, true});
  const double closure = std::hypot(circ_dist(back.x - state.x, 2.0), back.xi - state.xi);
  if (closure > 1e-6)
    throw Error("non-closed-orbit",
                "state does not return after the given period (defect " +
                    std::to_string(closure) + ")");

  Reduced r{state.x, state.xi, Eigen::Matrix2d::Identity()};
  r = reduced_rk4(r, period, state.eta, surface, dt);

  OrbitAnalysis out;
  out.pLevel = momentum_p(state, surface);
  out.eta = state.eta;
  out.period = period;
  out.monodromy = r.Phi;
  out.detMonodromy = r.Phi.determinant();

  const double tr = r.Phi.trace();
  const double disc = tr * tr - 4.0 * out.detMonodromy;
  double sr = 1.0;
  if (disc > 0.0) {
    const double mu1 = 0.5 * (tr + std::sqrt(disc));
    const double mu2 = 0.5 * (tr - std::sqrt(disc));
    sr = std::max(std::fabs(mu1), std::fabs(mu2));
    const double muU = std::fabs(mu1) >= std::fabs(mu2) ? mu1 : mu2;
    const double muS = std::fabs(mu1) >= std::fabs(mu2) ? mu2 : mu1;
    auto eigvec = [&](double mu) {
      Eigen::Vector2d v1(r.Phi(0, 1), mu - r.Phi(0, 0));
      Eigen::Vector2d v2(mu - r.Phi(1, 1), r.Phi(1, 0));
      Eigen::Vector2d v = v1.norm() >= v2.norm() ? v1 : v2;
      return v.normalized();
    };
    out.unstableDir = eigvec(muU);
    out.stableDir = eigvec(muS);
  }
  out.lambda = std::log(std::max(sr, 1.0)) / period;
  out.degenerate = std::fabs(sr - 1.0) <= 1e-4;
  if (out.degenerate) out.lambda = 0.0;
  return out;
}

double unstable_jacobian(const WarpedSurface& surface, const OrbitAnalysis& orbit,
                         const GeodesicState& rho, double t, double dt) {
  if (orbit.degenerate)
    throw Error("unsupported-degenerate",
                "unstable Jacobian needs a hyperbolic orbit (lambda > 0)");
  if (t == 0.0) return 1.0;

  const GeodesicState advanced = flow(rho, t, surface, FlowOptions{dt, 1e-8, true});

  // Adapted weak-unstable basis at the advanced point: flow direction plus the
  // unstable eigendirection lifted into the (x, 0, xi, 0) plane.
  Eigen::Matrix<double, 4, 2> V;
  V.col(0) = hamilton_field(advanced, surface);
  V.col(1) << orbit.unstableDir(0), 0.0, orbit.unstableDir(1), 0.0;

  Tangent4 st{advanced, V};
  st = tangent_rk4(st, t, surface, dt, -1.0);

  return parallelogram_volume(st.V) / parallelogram_volume(V);
}

double unstable_jacobian(const WarpedSurface& surface, const OrbitAnalysis& orbit, double t,
                         double dt) {
  GeodesicState rho;
  rho.eta = orbit.eta;
  return unstable_jacobian(surface, orbit, rho, t, dt);
}

double pressure_orbit(const WarpedSurface& surface, const OrbitAnalysis& orbit,
                      const PhaseFunction& f, int quadSamples) {
  (void)surface;
  // Time average over one period; theta advances uniformly on the orbit.
  double acc = 0.0;
  for (int k = 0; k < quadSamples; ++k) {
    GeodesicState s;
    s.theta = 2.0 * M_PI * k / quadSamples;
    s.eta = orbit.eta;
    acc += f(s);
  }
  return acc / quadSamples;
}

PressureEstimate pressure_separated(const WarpedSurface& surface,
                                    const std::vector<GeodesicState>& samples,
                                    const PhaseFunction& f, const std::vector<int>& nValues,
                                    const std::vector<double>& epsValues, double dt) {
  if (samples.empty()) throw Error("empty-sample-set", "pressure estimator needs samples");
  if (nValues.empty() || epsValues.empty())
    throw Error("invalid-parameter", "pressure estimator needs n and eps lists");

  const int M = static_cast<int>(samples.size());
  const int maxN = *std::max_element(nValues.begin(), nValues.end());

  // Orbits of the time-one map and Birkhoff sums of f along them.
  std::vector<std::vector<GeodesicState>> orbitStates(M);
  std::vector<std::vector<double>> birkhoff(M);  // birkhoff[i][n] = sum_{k<n} f
  for (int i = 0; i < M; ++i) {
    orbitStates[i].resize(maxN);
    birkhoff[i].assign(maxN + 1, 0.0);
    GeodesicState s = samples[i];
    for (int k = 0; k < maxN; ++k) {
      orbitStates[i][k] = s;
      birkhoff[i][k + 1] = birkhoff[i][k] + f(s);
      if (k + 1 < maxN) s = flow(s, 1.0, surface, FlowOptions{dt, 1e-8, true});
    }
  }

  // Bowen distances, built incrementally in n.
  std::vector<int> sortedN = nValues;
  std::sort(sortedN.begin(), sortedN.end());
  std::vector<std::vector<double>> bowen(M, std::vector<double>(M, 0.0));

  PressureEstimate est;
  std::vector<double> sortedEps = epsValues;
  std::sort(sortedEps.begin(), sortedEps.end(), std::greater<double>());
  est.perEps.resize(sortedEps.size());
  for (size_t e = 0; e < sortedEps.size(); ++e) est.perEps[e].eps = sortedEps[e];

  int kDone = 0;
  for (int n : sortedN) {
    for (int k = kDone; k < n; ++k)
      for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) {
          const double d = phase_dist(orbitStates[i][k], orbitStates[j][k]);
          if (d > bowen[i][j]) bowen[i][j] = bowen[j][i] = d;
        }
    kDone = n;

    for (auto& pe : est.perEps) {
      // Greedy maximal separated subset (a lower bound for the supremum).
      std::vector<int> kept;
      for (int i = 0; i < M; ++i) {
        bool ok = true;
        for (int j : kept)
          if (bowen[std::min(i, j)][std::max(i, j)] <= pe.eps) {
            ok = false;
            break;
          }
        if (ok) kept.push_back(i);
      }
      double maxS = -1e300;
      for (int i : kept) maxS = std::max(maxS, birkhoff[i][n]);
      double z = 0.0;
      for (int i : kept) z += std::exp(birkhoff[i][n] - maxS);
      const double logZ = maxS + std::log(z);
      pe.nValues.push_back(n);
      pe.prAtN.push_back(logZ / n);
      pe.separatedCount = static_cast<int>(kept.size());
    }
  }

  // Linear extrapolation of Pr(n) against 1/n.
  for (auto& pe : est.perEps) {
    const int K = static_cast<int>(pe.nValues.size());
    if (K == 1) {
      pe.extrapolated = pe.prAtN[0];
      continue;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < K; ++k) {
      const double xk = 1.0 / pe.nValues[k];
      sx += xk;
      sy += pe.prAtN[k];
      sxx += xk * xk;
      sxy += xk * pe.prAtN[k];
    }
    const double denom = K * sxx - sx * sx;
    pe.extrapolated = denom != 0.0 ? (sy * sxx - sx * sxy) / denom : pe.prAtN.back();
  }
  est.value = est.perEps.back().extrapolated;  // smallest eps
  return est;
}

StableManifoldReport stable_manifold_check(const WarpedSurface& surface,
                                           const std::vector<GeodesicState>& states,
                                           double tMax, double dt) {
  StableManifoldReport rep;
  for (const GeodesicState& s0 : states) {
    StableManifoldRow row;
    row.start = s0;
    row.inward = s0.x * s0.xi < 0.0;
    GeodesicState s = s0;
    row.minDist = std::hypot(std::fabs(wrap_to_cell(s.x)), s.xi);
    const int steps = static_cast<int>(std::ceil(tMax / dt));
    for (int k = 1; k <= steps; ++k) {
      s = flow(s, dt, surface, FlowOptions{dt, 1e-6, false});
      const double dist = std::hypot(std::fabs(wrap_to_cell(s.x)), s.xi);
      if (dist < row.minDist) {
        row.minDist = dist;
        row.tAtMin = k * dt;
      }
      if (!row.escaped && std::fabs(wrap_to_cell(s.x)) > 0.5) {
        row.escaped = true;
        row.tEscape = k * dt;
      }
    }
    row.finalDist = std::hypot(std::fabs(wrap_to_cell(s.x)), s.xi);
    rep.rows.push_back(row);
  }
  return rep;
}

GeodesicState peanut_invariant_state(double u, double eta, bool inward) {
  GeodesicState s;
  s.x = u;
  s.eta = eta;
  const double branch = inward ? -1.0 : 1.0;
  s.xi = branch * eta * std::tanh(u);
  return s;
}

}  // namespace dwlab
