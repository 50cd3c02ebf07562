// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "dwlab/errors.hpp"
#include "dwlab/resolvent.hpp"
#include "dwlab/rng.hpp"

using namespace dwlab;

namespace {

Eigen::SparseMatrix<Complex> random_tridiag(int n, Rng& rng, double diagShift) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int j = 0; j < n; ++j) {
    trip.emplace_back(j, j, Complex(diagShift + 0.3 * rng.normal(), 0.2 * rng.normal()));
    trip.emplace_back(j, (j + 1) % n, Complex(-1.0 + 0.1 * rng.normal(), 0.0));
    trip.emplace_back((j + 1) % n, j, Complex(-1.0 + 0.1 * rng.normal(), 0.0));
  }
  Eigen::SparseMatrix<Complex> S(n, n);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

}  // namespace

TEST_CASE("8x8 sigma_min matches the explicit-inverse oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXcd M(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) M(i, j) = rng.complexNormal();
    // brute force: operator norm of the explicit inverse via Jacobi SVD
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M.inverse());
    const double oracle = 1.0 / svd.singularValues()(0);
    CHECK(dense_sigma_min(M) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("iterative sigma_min agrees with the dense SVD to 1e-8") {
  Rng rng(5150);
  for (int n : {64, 128, 257}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto S = random_tridiag(n, rng, 0.05 + 0.4 * trial);
      SigmaOptions it;
      it.method = SigmaOptions::Method::Iterative;
      const SigmaResult si = smallest_singular_value(S, it);
      const double sd = dense_sigma_min(Eigen::MatrixXcd(S));
      CHECK(si.sigma == doctest::Approx(sd).epsilon(1e-8));
    }
  }
}

TEST_CASE("auto method switches at the dense threshold") {
  Rng rng(31);
  const auto S = random_tridiag(96, rng, 0.5);
  SigmaOptions opts;
  opts.denseSwitch = 128;
  CHECK(smallest_singular_value(S, opts).usedDense);
  opts.denseSwitch = 64;
  CHECK_FALSE(smallest_singular_value(S, opts).usedDense);
}

TEST_CASE("absorbing bounds: W == 1 numerical range, lower half plane") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 256);
  const Profile one(ProfileName::Absorption, 0.0, 0.0, 1.0, 1.0, 1.0);
  const double h = 0.125;
  const ModeOperator op(t1, g, one, h, 6, OperatorKind::Absorbing);

  // constant W == 1: skew part exactly i, norm <= 1 on the real axis
  CHECK(resolvent_norm(op, Complex(1.0, 0.0)) <= 1.0 + 1e-10);
  // quantitative lower-half-plane bound, norm <= 1/|Im z|
  CHECK(resolvent_norm(op, Complex(1.0, -0.1)) <= 10.0 * (1.0 + 1e-10));

  Rng rng(8);
  const ProfileSet ps = build_standard_profiles();
  const ModeOperator opW(t1, g, ps.W, h, 6, OperatorKind::Absorbing);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex z(rng.uniform(0.8, 1.2), -rng.uniform(0.01, 0.5));
    CHECK(resolvent_norm(opW, z) <= (1.0 / std::fabs(z.imag())) * (1.0 + 1e-10));
  }
}

TEST_CASE("symmetrization conventions agree") {
  // sigma_min of S and of S^H coincide: the two weighted symmetrizations give
  // the same operator norm.
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 200);
  const ProfileSet ps = build_standard_profiles();
  const ModeOperator op(t1, g, ps.a, 0.25, 4, OperatorKind::Damped);
  const Eigen::MatrixXcd S = Eigen::MatrixXcd(op.symmetrized(Complex(0.97, 0.0)));
  const double a = dense_sigma_min(S);
  const double b = dense_sigma_min(Eigen::MatrixXcd(S.adjoint()));
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("near-pole shifts are reported, not thrown") {
  const WarpedSurface flat = WarpedSurface::flat();
  const Grid1D g = build_grid(flat, 128);
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const ModeOperator op(flat, g, zero, 1.0, 0, OperatorKind::Damped);
  // z == 0 is exactly an eigenvalue of the discrete Laplacian
  const ResolventNorm rn = resolvent_norm_detailed(op, Complex(0.0, 0.0));
  CHECK(rn.nearPole);
}

TEST_CASE("global norm: elliptic-everywhere damping gives the 1/(h eps0) bound") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const ProfileSet uniform = build_uniform_damping(1.0);
  GlobalNormOptions opts;
  opts.resolutionOverride = 256;
  const double h = 0.125;
  const GlobalNormResult g =
      global_resolvent_norm(t1, uniform, h, Complex(1.0, 0.0), OperatorKind::Damped, opts);
  CHECK(g.norm <= (1.0 / (h * uniform.eps0)) * (1.0 + 1e-10));
  CHECK(g.tailMonotone);
}

TEST_CASE("global norm: trapping peaks at the Clairaut level hn near A(0)") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const ProfileSet ps = build_standard_profiles();
  GlobalNormOptions opts;
  opts.resolutionOverride = 256;
  const double h = 0.125;
  const GlobalNormResult g =
      global_resolvent_norm(t1, ps, h, Complex(1.0, 0.0), OperatorKind::Damped, opts);
  CHECK(std::fabs(h * g.argmaxN - 1.0) <= 0.2);
  CHECK(g.nMax >= static_cast<int>(2.0 * t1.maxWarp() / h) - 1);
}

TEST_CASE("cutoff resolvent: zero and identity cutoffs, trapped-set validation") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 256);
  const ProfileSet ps = build_standard_profiles();
  const double h = 0.125;
  const ModeOperator op(t1, g, ps.W, h, 8, OperatorKind::Absorbing);

  TrappedSetReport empty;  // no trapped set: any cutoff is admissible
  const Profile zero(ProfileName::Chi, 0.0, 0.0, 0.0, 0.0, 0.0);
  CHECK(cutoff_resolvent_norm(op, Complex(1.0, 0.0), CutoffSide::Right, zero, empty) == 0.0);

  const Profile one(ProfileName::Chi, 0.0, 0.0, 1.0, 1.0, 1.0);
  const double full = resolvent_norm(op, Complex(1.0, 0.0));
  const double cut = cutoff_resolvent_norm(op, Complex(1.0, 0.0), CutoffSide::Right, one, empty);
  CHECK(cut == doctest::Approx(full).epsilon(1e-7));

  TrappedSetReport trapped;
  trapped.nonEmpty = true;
  trapped.projectionRadius = 0.05;
  CHECK_THROWS_AS(
      cutoff_resolvent_norm(op, Complex(1.0, 0.0), CutoffSide::Right, one, trapped), Error);
  CHECK_NOTHROW(
      cutoff_resolvent_norm(op, Complex(1.0, 0.0), CutoffSide::Right, ps.chi, trapped));
}

TEST_CASE("scaling fits: exact power law, log-model identification, guards") {
  std::vector<std::pair<double, double>> power;
  std::vector<std::pair<double, double>> logsamples;
  for (double h : {1.0 / 16, 1.0 / 24, 1.0 / 32, 1.0 / 64, 1.0 / 96, 1.0 / 128}) {
    power.emplace_back(h, 3.0 / h);
    logsamples.emplace_back(h, std::fabs(std::log(h)) / h);
  }
  const ScalingFit fp = fit_scaling(power, ScalingFit::Model::Power);
  CHECK(fp.exponent == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(fp.coeff == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fp.residualPower < 1e-10);

  const ScalingFit fl = fit_scaling(logsamples, ScalingFit::Model::Log);
  CHECK(fl.residualLog < 1e-10);
  CHECK(fl.residualPower > 10.0 * (fl.residualLog + 1e-14));
  CHECK(fl.coeff == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fl.alphaAt(1.0 / 64) == doctest::Approx(std::log(64.0)).epsilon(1e-10));

  std::vector<std::pair<double, double>> few = {{0.5, 1}, {0.25, 2}, {0.125, 4}, {0.0625, 8}};
  CHECK_THROWS_AS(fit_scaling(few, ScalingFit::Model::Power), Error);
  std::vector<std::pair<double, double>> narrow = {
      {0.5, 1}, {0.45, 1}, {0.4, 1}, {0.35, 1}, {0.3, 1}};
  CHECK_THROWS_AS(fit_scaling(narrow, ScalingFit::Model::Power), Error);
}

TEST_CASE("elliptic tail monotonicity holds on a small scan") {
  const WarpedSurface t2 = WarpedSurface::build(SurfaceKind::TorusFamily, 2);
  const ProfileSet ps = build_standard_profiles();
  GlobalNormOptions opts;
  opts.resolutionOverride = 256;
  const GlobalNormResult g =
      global_resolvent_norm(t2, ps, 0.125, Complex(1.0, 0.0), OperatorKind::Absorbing, opts);
  CHECK(g.tailMonotone);
  // the tail samples themselves decrease
  const int edge = static_cast<int>(std::ceil(t2.maxWarp() * std::sqrt(1.25) / 0.125)) + 1;
  for (int n = edge; n + 1 <= g.nMax; ++n)
    CHECK(g.samples[n + 1].norm <= 1.05 * g.samples[n].norm);
}

TEST_CASE("control chain produces finite constants and the exact c3 scale") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const ProfileSet ps = build_standard_profiles();
  const double h = 1.0 / 16;
  const ControlChainReport rep =
      verify_control_chain(t1, ps, h, Complex(1.0, 0.0), 6, 3.0, 99, -1, 256);
  CHECK(rep.samples.size() == 6);
  CHECK(rep.maxima.c3 > 0.0);
  // (iii) with the stationary identity: h ||chi u||^2 <= C ||f|| ||u|| with a
  // modest C; chi^2 <= a / (eps0/2) by construction makes C order one.
  CHECK(rep.maxima.c3 < 10.0);
  CHECK(std::isfinite(rep.maxima.c1));
  CHECK(std::isfinite(rep.maxima.c2B));
  CHECK(std::isfinite(rep.maxima.c2Phi));
}
