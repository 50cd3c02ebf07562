// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/resolvent.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

#include "dwlab/errors.hpp"
#include "dwlab/parallel.hpp"
#include "dwlab/rng.hpp"

namespace dwlab {

namespace {

const Profile& coefficient_for(OperatorKind kind, const ProfileSet& profiles) {
  return kind == OperatorKind::Absorbing ? profiles.W : profiles.a;
}

Eigen::VectorXd profile_samples(const Profile& p, const Grid1D& grid) {
  Eigen::VectorXd v(grid.n);
  for (int j = 0; j < grid.n; ++j) v[j] = p(grid.x[j]);
  return v;
}

constexpr double kHugeNorm = 1e300;

}  // namespace

ResolventNorm resolvent_norm_detailed(const ModeOperator& op, Complex z,
                                      const SigmaOptions& opts) {
  ResolventNorm out;
  const SigmaResult res = smallest_singular_value(op.symmetrized(z), opts);
  out.sigmaMin = res.sigma;
  out.usedDense = res.usedDense;
  out.converged = res.converged;
  if (res.singular || res.sigma <= 0.0) {
    out.nearPole = true;
    out.norm = kHugeNorm;
    return out;
  }
  out.norm = 1.0 / res.sigma;
  out.nearPole = res.sigma < 1e-14 * op.normUpperBound();
  return out;
}

double resolvent_norm(const ModeOperator& op, Complex z, const SigmaOptions& opts) {
  return resolvent_norm_detailed(op, z, opts).norm;
}

namespace {

// Shared driver for global resolvent/cutoff norms: evaluates value(n) on all
// modes, reduces the max, and runs the elliptic-tail monotonicity check.
template <typename ModeValue>
GlobalNormResult global_mode_scan(const WarpedSurface& surface, double h, Complex z,
                                  OperatorKind kind, const GlobalNormOptions& opts,
                                  const std::string& cutoffLabel, ModeValue&& value) {
  GlobalNormResult out;
  out.nMax = static_cast<int>(std::ceil(opts.bandFactor * surface.maxWarp() / h));
  out.samples.resize(out.nMax + 1);

  parallel_for(
      out.nMax + 1,
      [&](int n) {
        NormSample s;
        s.kind = kind;
        s.h = h;
        s.z = z;
        s.n = n;
        s.cutoff = cutoffLabel;
        s.norm = value(n, &s.nearPole);
        out.samples[n] = s;
      },
      opts.threads);

  for (int n = 0; n <= out.nMax; ++n)
    if (out.samples[n].norm > out.norm) {
      out.norm = out.samples[n].norm;
      out.argmaxN = n;
    }

  const int nEdge =
      static_cast<int>(std::ceil(surface.maxWarp() * std::sqrt(1.0 + opts.delta) / h)) + 1;
  for (int n = nEdge; n + 1 <= out.nMax; ++n)
    if (out.samples[n + 1].norm > opts.tailTolerance * out.samples[n].norm) {
      out.tailMonotone = false;
      break;
    }
  return out;
}

}  // namespace

GlobalNormResult global_resolvent_norm(const WarpedSurface& surface, const ProfileSet& profiles,
                                       double h, Complex z, OperatorKind kind,
                                       const GlobalNormOptions& opts) {
  const int N = opts.resolutionOverride > 0 ? opts.resolutionOverride : resolution_for(h);
  const Grid1D grid = build_grid(surface, N);
  const Profile& coeff = coefficient_for(kind, profiles);
  const Complex buildZ = kind == OperatorKind::Modified ? z : Complex(0.0, 0.0);
  const Complex shiftZ = kind == OperatorKind::Modified ? Complex(0.0, 0.0) : z;

  return global_mode_scan(surface, h, z, kind, opts, "none", [&](int n, bool* nearPole) {
    ModeOperator op(surface, grid, coeff, h, n, kind, buildZ);
    const ResolventNorm rn = resolvent_norm_detailed(op, shiftZ, opts.sigma);
    *nearPole = rn.nearPole;
    return rn.norm;
  });
}

double cutoff_resolvent_norm(const ModeOperator& op, Complex z, CutoffSide side,
                             const Profile& cutoff, const TrappedSetReport& trapped,
                             const SigmaOptions& opts) {
  if (trapped.nonEmpty) {
    const double guard = trapped.projectionRadius + 0.01;
    for (int k = 0; k <= 64; ++k) {
      const double x = guard * k / 64.0;
      if (cutoff(x) != 0.0)
        throw Error("invalid-cutoff",
                    "cutoff overlaps the projected trapped set (|x| <= " +
                        std::to_string(guard) + ")");
    }
  }
  const Grid1D& grid = op.grid();
  const Eigen::VectorXd chi = profile_samples(cutoff, grid);
  if (chi.maxCoeff() == 0.0) return 0.0;

  const int N = op.size();
  const Eigen::SparseMatrix<Complex> S = op.symmetrized(z);

  const bool dense = opts.method == SigmaOptions::Method::Dense ||
                     (opts.method == SigmaOptions::Method::Auto && N <= opts.denseSwitch);
  if (dense) {
    Eigen::MatrixXcd rhs = chi.cast<Complex>().asDiagonal();
    Eigen::MatrixXcd Sd(S);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Sd);
    Eigen::MatrixXcd B = lu.solve(rhs);
    if (side == CutoffSide::Both) B = chi.cast<Complex>().asDiagonal() * B;
    return dense_sigma_max(B);
  }

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success) return kHugeNorm;

  LinearMap map;
  map.size = N;
  map.apply = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
    Eigen::VectorXcd t = chi.array() * v.array();
    out = lu.solve(t);
    if (side == CutoffSide::Both) out = chi.array() * out.array();
  };
  map.applyAdjoint = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
    Eigen::VectorXcd t = v;
    if (side == CutoffSide::Both) t = chi.array() * t.array();
    Eigen::VectorXcd w = lu.adjoint().solve(t);
    out = chi.array() * w.array();
  };
  SigmaResult res = largest_singular_value(map, opts);
  return res.sigma;
}

GlobalNormResult global_cutoff_norm(const WarpedSurface& surface, const ProfileSet& profiles,
                                    double h, Complex z, OperatorKind kind, CutoffSide side,
                                    const Profile& cutoff, const TrappedSetReport& trapped,
                                    const GlobalNormOptions& opts) {
  const int N = opts.resolutionOverride > 0 ? opts.resolutionOverride : resolution_for(h);
  const Grid1D grid = build_grid(surface, N);
  const Profile& coeff = coefficient_for(kind, profiles);
  const Complex buildZ = kind == OperatorKind::Modified ? z : Complex(0.0, 0.0);
  const Complex shiftZ = kind == OperatorKind::Modified ? Complex(0.0, 0.0) : z;
  const std::string label = side == CutoffSide::Right ? "right-chi" : "two-sided-chi";

  return global_mode_scan(surface, h, z, kind, opts, label, [&](int n, bool* nearPole) {
    *nearPole = false;
    ModeOperator op(surface, grid, coeff, h, n, kind, buildZ);
    return cutoff_resolvent_norm(op, shiftZ, side, cutoff, trapped, opts.sigma);
  });
}

TransferReport verify_transfer(const WarpedSurface& surface, const ProfileSet& profiles,
                               const std::vector<double>& hList, double delta, double c0,
                               const ScalingFit& absorbingFit, double boundFactor,
                               const GlobalNormOptions& opts) {
  TransferReport rep;
  rep.absorbingFit = absorbingFit;
  rep.boundFactor = boundFactor;

  std::vector<std::pair<double, double>> dampedSamples;
  for (double h : hList) {
    TransferRow row;
    row.h = h;
    row.alphaH = absorbingFit.alphaAt(h);
    const double zRe[3] = {1.0 - 0.5 * delta, 1.0, 1.0 + 0.5 * delta};
    for (double zr : zRe) {
      const GlobalNormResult g =
          global_resolvent_norm(surface, profiles, h, Complex(zr, 0.0), OperatorKind::Damped, opts);
      if (g.norm > row.dampedMax) {
        row.dampedMax = g.norm;
        row.argmaxN = g.argmaxN;
      }
    }
    const double imShift = c0 * h / row.alphaH;
    row.normImPlus = global_resolvent_norm(surface, profiles, h, Complex(1.0, imShift),
                                           OperatorKind::Damped, opts)
                         .norm;
    row.normImMinus = global_resolvent_norm(surface, profiles, h, Complex(1.0, -imShift),
                                            OperatorKind::Damped, opts)
                          .norm;
    row.empiricalC = row.dampedMax * h / row.alphaH;
    row.alphaSqOverH = row.alphaH * row.alphaH / h;
    rep.rows.push_back(row);
    dampedSamples.emplace_back(h, row.dampedMax);
  }

  rep.dampedFit = fit_scaling(dampedSamples, ScalingFit::Model::Power);
  double cMin = rep.rows.front().empiricalC, cMax = cMin;
  for (const TransferRow& r : rep.rows) {
    cMin = std::min(cMin, r.empiricalC);
    cMax = std::max(cMax, r.empiricalC);
  }
  rep.spreadC = cMax / cMin;
  rep.bounded = rep.spreadC <= boundFactor;
  return rep;
}

namespace {

// Nearest eigenvalue to z0 of the (symmetrized) operator by inverse iteration.
struct LocatedEig {
  Complex lambda{0.0, 0.0};
  bool accepted = false;
};

LocatedEig nearest_eigenvalue(const Eigen::SparseMatrix<Complex>& Sz0, Complex z0,
                              double residualScale, std::uint64_t seed) {
  LocatedEig out;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(Sz0);
  if (lu.info() != Eigen::Success) {
    out.lambda = z0;
    out.accepted = true;
    return out;
  }
  const int n = static_cast<int>(Sz0.rows());
  Rng rng(seed);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.complexNormal();
  v.normalize();
  Complex mu(0.0, 0.0);
  for (int it = 0; it < 80; ++it) {
    Eigen::VectorXcd y = lu.solve(v);
    const Complex muNew = v.dot(y);  // v^H y with unit v
    const double change = std::abs(muNew - mu);
    mu = muNew;
    const double yn = y.norm();
    if (yn == 0.0) break;
    v = y / yn;
    if (it > 8 && change < 1e-12 * std::abs(mu)) break;
  }
  if (std::abs(mu) == 0.0) return out;
  const Complex lambda = z0 + 1.0 / mu;
  const Eigen::VectorXcd resid = Sz0 * v - (lambda - z0) * v;
  if (resid.norm() <= 1e-8 * residualScale) {
    out.lambda = lambda;
    out.accepted = true;
  }
  return out;
}

}  // namespace

StripScanResult strip_scan(const WarpedSurface& surface, const ProfileSet& profiles, double h,
                           const ScalingFit& alphaFit, OperatorKind kind,
                           const StripScanOptions& opts) {
  StripScanResult res;
  res.kind = kind;
  res.h = h;
  res.alphaH = alphaFit.alphaAt(h);
  const double imScale = h / res.alphaH;

  const int K = opts.sweepSteps;
  res.c0Sweep.resize(K);
  const double c0Min = opts.c0Max * opts.c0MinFactor;
  for (int k = 0; k < K; ++k)
    res.c0Sweep[k] = c0Min * std::pow(opts.c0Max / c0Min, k / (K - 1.0));
  res.minScaledSigma.assign(K, std::numeric_limits<double>::infinity());

  const int N = opts.resolutionOverride > 0 ? opts.resolutionOverride : resolution_for(h);
  const Grid1D grid = build_grid(surface, N);
  const Profile& coeff = coefficient_for(kind, profiles);

  const int nTail = static_cast<int>(std::ceil(opts.tailFactor * surface.maxWarp() / h));
  const int nBandLow = static_cast<int>(std::floor(opts.bandLow / h));

  // Re samples; for the modified kind the Re window shrinks with c0, so the
  // grid covers the largest window and each point carries its own minimal c0.
  // The modified window never exceeds the basic one.
  const double reHalf =
      kind == OperatorKind::Modified ? std::min(opts.c0Max / res.alphaH, opts.delta) : opts.delta;
  std::vector<double> rePoints(opts.nRe);
  for (int i = 0; i < opts.nRe; ++i)
    rePoints[i] = 1.0 - reHalf + 2.0 * reHalf * i / (opts.nRe - 1.0);

  struct ModeOut {
    std::vector<double> levelMin;       // per c0 bucket: min scaled sigma
    std::vector<Complex> located;
    double lowerHalfMargin = std::numeric_limits<double>::infinity();
  };
  std::vector<ModeOut> perMode(nTail + 1);

  parallel_for(
      nTail + 1,
      [&](int n) {
        ModeOut& mo = perMode[n];
        mo.levelMin.assign(K, std::numeric_limits<double>::infinity());
        const bool fullGrid = n >= nBandLow;

        auto sigma_at = [&](Complex z) {
          if (kind == OperatorKind::Modified) {
            ModeOperator op(surface, grid, coeff, h, n, kind, z);
            return smallest_singular_value(op.symmetrized(Complex(0, 0)), opts.sigma).sigma;
          }
          ModeOperator op(surface, grid, coeff, h, n, kind);
          return smallest_singular_value(op.symmetrized(z), opts.sigma).sigma;
        };

        // Axis row (counts toward every bucket).
        double axisMin = std::numeric_limits<double>::infinity();
        std::vector<double> axisSigma(opts.nRe);
        for (int i = 0; i < opts.nRe; ++i) {
          if (kind == OperatorKind::Modified) {
            const double c0pt = std::fabs(rePoints[i] - 1.0) * res.alphaH;
            const double s = sigma_at(Complex(rePoints[i], 0.0));
            axisSigma[i] = s;
            const auto bucket =
                std::lower_bound(res.c0Sweep.begin(), res.c0Sweep.end(), c0pt);
            if (bucket != res.c0Sweep.end()) {
              const int bi = static_cast<int>(bucket - res.c0Sweep.begin());
              mo.levelMin[bi] = std::min(mo.levelMin[bi], s / imScale);
            }
            continue;
          }
          const double s = sigma_at(Complex(rePoints[i], 0.0));
          axisSigma[i] = s;
          axisMin = std::min(axisMin, s / imScale);
        }
        if (kind != OperatorKind::Modified)
          mo.levelMin[0] = std::min(mo.levelMin[0], axisMin);

        // Im levels at the sweep values (full grid only inside the band).
        const int levelsToScan = fullGrid ? K : 1;
        for (int k = K - levelsToScan; k < K; ++k) {
          const double im = res.c0Sweep[k] * imScale;
          for (int i = 0; i < opts.nRe; ++i) {
            const double sPlus = sigma_at(Complex(rePoints[i], im));
            double s = sPlus;
            if (kind == OperatorKind::Modified) s = std::min(s, sigma_at(Complex(rePoints[i], -im)));
            double c0pt = res.c0Sweep[k];
            if (kind == OperatorKind::Modified)
              c0pt = std::max(c0pt, std::fabs(rePoints[i] - 1.0) * res.alphaH);
            const auto bucket = std::lower_bound(res.c0Sweep.begin(), res.c0Sweep.end(),
                                                 c0pt - 1e-15);
            if (bucket != res.c0Sweep.end()) {
              const int bi = static_cast<int>(bucket - res.c0Sweep.begin());
              mo.levelMin[bi] = std::min(mo.levelMin[bi], s / imScale);
            }
          }
        }

        // Damped kind: locate the nearby spectrum from on-axis seeds.
        if (kind == OperatorKind::Damped && fullGrid) {
          ModeOperator op(surface, grid, coeff, h, n, kind);
          const double scale = op.normUpperBound();
          const int probes = std::min(opts.gapProbes, opts.nRe);
          // Seed preferentially where sigma is small.
          std::vector<int> order(opts.nRe);
          for (int i = 0; i < opts.nRe; ++i) order[i] = i;
          std::sort(order.begin(), order.end(),
                    [&](int a, int b) { return axisSigma[a] < axisSigma[b]; });
          for (int p = 0; p < probes; ++p) {
            const Complex z0(rePoints[order[p]], 0.0);
            const LocatedEig le =
                nearest_eigenvalue(op.symmetrized(z0), z0, scale, 0xabcd + 131 * n + p);
            if (le.accepted) mo.located.push_back(le.lambda);
          }
        }

        // Absorbing kind: lower half plane row, sigma >= |Im z| exactly.
        if (kind == OperatorKind::Absorbing) {
          const double im = -opts.c0Max * imScale;
          for (int i = 0; i < opts.nRe; ++i) {
            const double s = sigma_at(Complex(rePoints[i], im));
            mo.lowerHalfMargin = std::min(mo.lowerHalfMargin, s / std::fabs(im));
          }
        }
      },
      opts.threads);

  // Serial reduction: bucket minima -> prefix minima over c0.
  std::vector<double> levelMin(K, std::numeric_limits<double>::infinity());
  res.lowerHalfMargin = std::numeric_limits<double>::infinity();
  for (const ModeOut& mo : perMode) {
    for (int k = 0; k < K; ++k) levelMin[k] = std::min(levelMin[k], mo.levelMin[k]);
    for (const Complex& ev : mo.located) res.spectrum.push_back(ev);
    res.lowerHalfMargin = std::min(res.lowerHalfMargin, mo.lowerHalfMargin);
  }
  double running = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    running = std::min(running, levelMin[k]);
    res.minScaledSigma[k] = running;
  }

  const double floor = std::max(1e-6, 0.25 * res.minScaledSigma[0]);
  for (int k = 0; k < K; ++k)
    if (res.minScaledSigma[k] >= floor) res.c0MaxGrid = res.c0Sweep[k];

  if (kind == OperatorKind::Damped) {
    for (const Complex& ev : res.spectrum)
      if (std::fabs(ev.real() - 1.0) <= opts.delta && ev.imag() > -1e-12)
        res.gapImMin = std::min(res.gapImMin, std::max(0.0, ev.imag()));
    if (std::isfinite(res.gapImMin)) res.c0MaxGap = res.gapImMin / imScale;
  }
  return res;
}

ControlChainReport verify_control_chain(const WarpedSurface& surface, const ProfileSet& profiles,
                                        double h, Complex z, int nSamples, double alphaH,
                                        std::uint64_t seed, int modeOverride,
                                        int resolutionOverride) {
  ControlChainReport rep;
  rep.h = h;
  rep.z = z;
  rep.mode = modeOverride >= 0 ? modeOverride : static_cast<int>(std::lround(1.0 / h));

  const int N = resolutionOverride > 0 ? resolutionOverride : resolution_for(h);
  const Grid1D grid = build_grid(surface, N);
  ModeOperator op(surface, grid, profiles.a, h, rep.mode, OperatorKind::Damped);

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(op.symmetrized(z));
  if (lu.info() != Eigen::Success)
    throw Error("near-pole", "control chain hit a singular shift");

  const Eigen::VectorXd b1 = profile_samples(profiles.B1, grid);
  const Eigen::VectorXd phi = profile_samples(profiles.phi, grid);
  const Eigen::VectorXd chi = profile_samples(profiles.chi, grid);
  Eigen::VectorXd sqrtw(grid.n);
  for (int j = 0; j < grid.n; ++j) sqrtw[j] = std::sqrt(grid.w[j]);

  auto wnorm = [&](const Eigen::VectorXcd& v) { return weighted_norm(v, grid); };

  Rng rng(seed);
  for (int s = 0; s < nSamples; ++s) {
    Eigen::VectorXcd f(grid.n);
    if (s % 2 == 0) {
      for (int j = 0; j < grid.n; ++j) f[j] = rng.complexNormal();
    } else {
      // Bump-localized sample away from the neck, modulated at the grid scale.
      const double center = rng.uniform(0.35, 0.9) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      const double width = 0.05 + 0.1 * rng.uniform();
      const double phase = rng.uniform(0.0, 2.0 * M_PI);
      const double kx = rng.uniform(0.3, 1.2) / h;
      for (int j = 0; j < grid.n; ++j) {
        const double d = wrap_to_cell(grid.x[j] - center);
        f[j] = std::exp(-d * d / (2.0 * width * width)) *
               std::exp(Complex(0.0, kx * grid.x[j] + phase));
      }
    }

    // u = (P - z)^{-1} f through the symmetrized factorization.
    Eigen::VectorXcd fs = f;
    for (int j = 0; j < grid.n; ++j) fs[j] *= sqrtw[j];
    Eigen::VectorXcd us = lu.solve(fs);
    Eigen::VectorXcd u = us;
    for (int j = 0; j < grid.n; ++j) u[j] /= sqrtw[j];

    const double nf = wnorm(f);
    const double nu = wnorm(u);
    Eigen::VectorXcd b1u = b1.array() * u.array();
    Eigen::VectorXcd b1f = b1.array() * f.array();
    Eigen::VectorXcd phiu = phi.array() * u.array();
    Eigen::VectorXcd chiu = chi.array() * u.array();
    Eigen::VectorXcd oneMinusB1u = u - b1u;

    ControlChainReport::Sample smp;
    const double lhs1 = wnorm(b1u) - (alphaH / h) * wnorm(b1f);
    const double den1 = std::sqrt(alphaH) * wnorm(phiu);
    smp.c1 = den1 > 1e-14 * nu ? std::max(0.0, lhs1 / den1) : 0.0;
    const double den2 = nf / h + wnorm(chiu);
    smp.c2B = wnorm(oneMinusB1u) / den2;
    smp.c2Phi = wnorm(phiu) / den2;
    smp.c3 = h * std::pow(wnorm(chiu), 2) / (nf * nu);
    rep.samples.push_back(smp);

    rep.maxima.c1 = std::max(rep.maxima.c1, smp.c1);
    rep.maxima.c2B = std::max(rep.maxima.c2B, smp.c2B);
    rep.maxima.c2Phi = std::max(rep.maxima.c2Phi, smp.c2Phi);
    rep.maxima.c3 = std::max(rep.maxima.c3, smp.c3);
  }
  return rep;
}

}  // namespace dwlab
