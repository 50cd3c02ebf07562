// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dwlab/errors.hpp"
#include "dwlab/grid.hpp"
#include "dwlab/mode_operator.hpp"
#include "dwlab/rng.hpp"

using namespace dwlab;

namespace {

Eigen::VectorXcd random_vector(int n, Rng& rng) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.complexNormal();
  return v;
}

// Adaptive Simpson quadrature, the independent oracle for the grid measure.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb,
               double fm, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, fm, flm, tol / 2, depth - 1) +
         simpson(f, m, b, fm, fb, frm, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return simpson(f, a, b, f(a), f(b), f(0.5 * (a + b)), 1e-12, 28);
}

}  // namespace

TEST_CASE("grid weights: uniform on the flat warp, quadrature oracle on the torus") {
  const WarpedSurface flat = WarpedSurface::flat();
  const Grid1D g = build_grid(flat, 128);
  for (double w : g.w) CHECK(w == doctest::Approx(2.0 / 128).epsilon(1e-15));

  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g1 = build_grid(t1, 256);
  const double oracle = integrate([&](double x) { return t1.warpValue(x); }, -1.0, 1.0);
  CHECK(std::fabs(g1.totalMeasure - oracle) < 1e-4);
  for (double w : g1.w) CHECK(w > 0.0);
}

TEST_CASE("grid rejects too-coarse resolutions; policy clamps apply") {
  const WarpedSurface flat = WarpedSurface::flat();
  CHECK_THROWS_AS(build_grid(flat, 32), Error);
  CHECK(resolution_for(1.0 / 16) == 512);
  CHECK(resolution_for(1.0 / 64) == 2048);
  CHECK(resolution_for(1.0 / 128) == 2048);  // cap
  CHECK(resolution_for(0.9) == 256);         // floor
}

TEST_CASE("flat n=0 operator reproduces the periodic second-difference spectrum") {
  const WarpedSurface flat = WarpedSurface::flat();
  const int N = 128;
  const Grid1D g = build_grid(flat, N);
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const double h = 0.5;
  const ModeOperator op(flat, g, zero, h, 0, OperatorKind::Damped);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.dense());
  std::vector<double> eigs(N);
  for (int i = 0; i < N; ++i) eigs[i] = es.eigenvalues()[i].real();
  std::sort(eigs.begin(), eigs.end());

  std::vector<double> exact(N);
  for (int k = 0; k < N; ++k)
    exact[k] = h * h * (2.0 / (g.dx * g.dx)) * (1.0 - std::cos(2.0 * M_PI * k / N));
  std::sort(exact.begin(), exact.end());
  for (int i = 0; i < N; ++i) CHECK(std::fabs(eigs[i] - exact[i]) < 1e-10 * (1.0 + exact[i]));
}

TEST_CASE("constants are harmonic for the n=0 operator on any surface") {
  const WarpedSurface t2 = WarpedSurface::build(SurfaceKind::TorusFamily, 2);
  const Grid1D g = build_grid(t2, 128);
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const ModeOperator op(t2, g, zero, 1.0, 0, OperatorKind::Damped);
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(g.n);
  // rounding scale: entries are O(1/dx^2)
  CHECK((op.apply(ones)).norm() < 1e-15 * op.normUpperBound() * std::sqrt(g.n));
}

TEST_CASE("eigenvalue convergence at rate O(dx^2) under grid doubling") {
  const WarpedSurface flat = WarpedSurface::flat();
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const double h = 1.0;
  const double target = h * h * M_PI * M_PI;  // k=1 mode on the period-2 cell
  std::vector<double> errs;
  for (int N : {64, 128, 256}) {
    const Grid1D g = build_grid(flat, N);
    const ModeOperator op(flat, g, zero, h, 0, OperatorKind::Damped);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.dense());
    std::vector<double> eigs(N);
    for (int i = 0; i < N; ++i) eigs[i] = es.eigenvalues()[i].real();
    std::sort(eigs.begin(), eigs.end());
    errs.push_back(std::fabs(eigs[1] - target));  // first nonzero (double) eigenvalue
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("weighted inner product: measure, Cauchy-Schwarz, symmetry") {
  const WarpedSurface flat = WarpedSurface::flat();
  const Grid1D g = build_grid(flat, 128);
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(g.n);
  CHECK(weighted_inner(ones, ones, g).real() == doctest::Approx(2.0).epsilon(1e-14));

  Rng rng(7);
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D gt = build_grid(t1, 256);
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const ModeOperator op(t1, gt, zero, 0.25, 3, OperatorKind::Damped);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXcd u = random_vector(gt.n, rng);
    const Eigen::VectorXcd v = random_vector(gt.n, rng);
    CHECK(std::abs(weighted_inner(u, v, gt)) <=
          weighted_norm(u, gt) * weighted_norm(v, gt) * (1.0 + 1e-12));
    // self-adjointness of the a == 0 operator in the weighted pairing
    const Complex lhs = weighted_inner(op.apply(u), v, gt);
    const Complex rhs = weighted_inner(u, op.apply(v), gt);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
  }
  Eigen::VectorXcd bad(3);
  CHECK_THROWS_AS(weighted_inner(bad, bad, gt), Error);
}

TEST_CASE("damped operator: skew part is exactly i h a") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 128);
  const ProfileSet ps = build_standard_profiles();
  const double h = 0.125;
  const ModeOperator op(t1, g, ps.a, h, 5, OperatorKind::Damped);
  for (int j = 0; j < g.n; ++j) {
    CHECK(op.kindDiagonal()[j].imag() == doctest::Approx(h * ps.a(g.x[j])).epsilon(1e-15));
    CHECK(op.kindDiagonal()[j].real() == 0.0);
  }
  const ModeOperator opW(t1, g, ps.W, h, 5, OperatorKind::Absorbing);
  for (int j = 0; j < g.n; ++j)
    CHECK(opW.kindDiagonal()[j].imag() == doctest::Approx(ps.W(g.x[j])).epsilon(1e-15));
}

TEST_CASE("modified kind needs the principal branch") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 128);
  const ProfileSet ps = build_standard_profiles();
  CHECK_THROWS_AS(ModeOperator(t1, g, ps.a, 0.25, 3, OperatorKind::Modified, Complex(-1.0, 0.1)),
                  Error);
  const ModeOperator op(t1, g, ps.a, 0.25, 3, OperatorKind::Modified, Complex(1.0, 0.01));
  // kind diagonal carries i h sqrt(z) a - z
  const Complex expected =
      Complex(0.0, 0.25) * std::sqrt(Complex(1.0, 0.01)) * ps.a(g.x[10]) - Complex(1.0, 0.01);
  CHECK(std::abs(op.kindDiagonal()[10] - expected) < 1e-15);
}

TEST_CASE("gauge pairing: the centrifugal diagonal depends only on hn") {
  const WarpedSurface t2 = WarpedSurface::build(SurfaceKind::TorusFamily, 2);
  const Grid1D g = build_grid(t2, 256);
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const ModeOperator a(t2, g, zero, 1.0 / 16, 16, OperatorKind::Damped);
  const ModeOperator b(t2, g, zero, 1.0 / 32, 32, OperatorKind::Damped);
  // hn = 1 in both; the n^2 part of the diagonal must agree exactly, the
  // Laplacian part scales by h^2.
  for (int j = 0; j < g.n; ++j) {
    const double na = a.realDiagonal()[j] -
                      (1.0 / 16) * (1.0 / 16) * (g.warpHalf[j] + g.warpHalf[(j + g.n - 1) % g.n]) /
                          (g.warp[j] * g.dx * g.dx);
    const double nb = b.realDiagonal()[j] -
                      (1.0 / 32) * (1.0 / 32) * (g.warpHalf[j] + g.warpHalf[(j + g.n - 1) % g.n]) /
                          (g.warp[j] * g.dx * g.dx);
    CHECK(na == doctest::Approx(nb).epsilon(1e-13));
  }
}

TEST_CASE("stationary identity is exact for the damped discretization") {
  Rng rng(11);
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const ProfileSet ps = build_standard_profiles();
  const Grid1D g = build_grid(t1, 256);

  // a == 0, z real
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const ModeOperator op0(t1, g, zero, 0.1, 7, OperatorKind::Damped);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXcd u = random_vector(g.n, rng);
    CHECK(stationary_identity_residual(op0, u, Complex(0.93, 0.0)) < 1e-13);
  }

  // generic damping, random complex z
  const ModeOperator op(t1, g, ps.a, 0.1, 7, OperatorKind::Damped);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXcd u = random_vector(g.n, rng);
    const Complex z(rng.uniform(0.75, 1.25), rng.uniform(-0.05, 0.05));
    CHECK(stationary_identity_residual(op, u, z) < 1e-12);
  }

  // eigenvector of the real part at its eigenvalue
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  const Eigen::MatrixXcd sym = Eigen::MatrixXcd(op.symmetrized(Complex(0.0, 0.0)));
  es.compute(Eigen::MatrixXd(sym.real()));
  const Eigen::VectorXcd v = es.eigenvectors().col(3).cast<Complex>();
  Eigen::VectorXcd vOrig(g.n);
  for (int j = 0; j < g.n; ++j) vOrig[j] = v[j] / std::sqrt(g.w[j]);
  CHECK(stationary_identity_residual(op, vOrig, Complex(es.eigenvalues()[3], 0.0)) < 1e-12);

  // absorbing kind is rejected
  const ModeOperator opW(t1, g, ps.W, 0.1, 7, OperatorKind::Absorbing);
  const Eigen::VectorXcd u = random_vector(g.n, rng);
  CHECK_THROWS_AS(stationary_identity_residual(opW, u, Complex(1.0, 0.0)), Error);
}

TEST_CASE("triplet dump round-trips the matrix") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 64 + 64);
  const ProfileSet ps = build_standard_profiles();
  const ModeOperator op(t1, g, ps.a, 0.5, 2, OperatorKind::Damped);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(g.n, g.n);
  for (const auto& [r, c, re, im] : op.triplets()) M(r, c) += Complex(re, im);
  CHECK((M - op.dense()).norm() < 1e-14);
}
