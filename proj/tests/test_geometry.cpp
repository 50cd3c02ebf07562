// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "dwlab/errors.hpp"
#include "dwlab/geometry.hpp"
#include "dwlab/rng.hpp"

using namespace dwlab;

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Test-side long-double evaluation of the torus warp's 2m-th power
// B(x) = 1 + kappa sin^{2m}(pi x/2); independent of the library path.
long double torus_power_oracle(long double x, int m) {
  const long double kappa = powl(2.0L / kPiL, 2 * m);
  return 1.0L + kappa * powl(sinl(0.5L * kPiL * x), 2 * m);
}

// k-th central divided difference with two Richardson steps (O(s^6)).
template <typename F>
long double central_derivative(F&& f, int k, long double s) {
  auto diff = [&](long double step) {
    long double acc = 0.0L;
    long double binom = 1.0L;
    for (int j = 0; j <= k; ++j) {
      acc += (j % 2 == 0 ? 1.0L : -1.0L) * binom * f((0.5L * k - j) * step);
      binom = binom * (k - j) / (j + 1);
    }
    return acc / powl(step, k);
  };
  const long double d1 = diff(s), d2 = diff(s / 2), d3 = diff(s / 4);
  const long double r1 = (4.0L * d2 - d1) / 3.0L;
  const long double r2 = (4.0L * d3 - d2) / 3.0L;
  return (16.0L * r2 - r1) / 15.0L;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("torus warp hits the prescribed neck values") {
  const WarpedSurface t2 = WarpedSurface::build(SurfaceKind::TorusFamily, 2);
  const WarpEval at0 = t2.warp(0.0);
  CHECK(at0.A == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(at0.dA) < 1e-14);
  CHECK(std::fabs(at0.d2A) < 1e-14);  // order-4 flatness

  // m=1 at x=0.1 against the exact local normal form sqrt(1+x^2); the global
  // warp deviates at O(x^4).
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const double local = std::sqrt(1.0 + 0.01);
  CHECK(std::fabs(t1.warpValue(0.1) - local) < 1e-3);
  CHECK(t1.warp(0.0).d2A == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("peanut warp: cosh neck, cosh(1) cap") {
  const WarpedSurface pea = WarpedSurface::build(SurfaceKind::Peanut, 1);
  CHECK(pea.warpValue(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pea.warp(0.0).d2A == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pea.warpValue(1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  // exact cosh inside the blend radius
  CHECK(pea.warpValue(0.4) == doctest::Approx(std::cosh(0.4)).epsilon(1e-14));
  CHECK(pea.warp(-0.3).dA == doctest::Approx(-std::sinh(0.3)).epsilon(1e-12));
}

TEST_CASE("warp evenness, positivity, periodicity across the seam") {
  Rng rng(41);
  for (SurfaceKind kind : {SurfaceKind::TorusFamily, SurfaceKind::Peanut}) {
    const int m = kind == SurfaceKind::TorusFamily ? 2 : 1;
    const WarpedSurface s = WarpedSurface::build(kind, m);
    for (int i = 0; i < 200; ++i) {
      const double x = rng.uniform(-1.0, 1.0);
      const WarpEval plus = s.warp(x);
      const WarpEval minus = s.warp(-x);
      CHECK(plus.A > 0.0);
      CHECK(plus.A == doctest::Approx(minus.A).epsilon(1e-13));
      CHECK(std::fabs(plus.dA + minus.dA) < 1e-12 * std::max(1.0, std::fabs(plus.dA)));
    }
    // seam continuity and periodic identification
    for (double d : {1e-3, 1e-5, 1e-8}) {
      CHECK(std::fabs(s.warpValue(1.0 - d) - s.warpValue(-1.0 + d)) < 5e-3);
      CHECK(std::fabs(s.warpValue(1.0 + d) - s.warpValue(1.0 - d)) < 5e-3);
    }
    // finite-difference derivative across the seam agrees with the analytic one
    const double step = 1e-5;
    const double fd = (s.warpValue(1.0 + step) - s.warpValue(1.0 - step)) / (2.0 * step);
    CHECK(std::fabs(fd - s.warp(1.0).dA) < 1e-6);
  }
}

TEST_CASE("analytic warp derivatives agree with divided differences") {
  for (int m : {1, 2, 3}) {
    const WarpedSurface s = WarpedSurface::build(SurfaceKind::TorusFamily, m);
    for (double x : {0.05, 0.3, 0.7, 0.95}) {
      const WarpEval we = s.warp(x);
      const double step = 1e-4;
      const double d1 = (s.warpValue(x + step) - s.warpValue(x - step)) / (2.0 * step);
      const double d2 =
          (s.warpValue(x + step) - 2.0 * s.warpValue(x) + s.warpValue(x - step)) / (step * step);
      CHECK(d1 == doctest::Approx(we.dA).epsilon(1e-6));
      CHECK(d2 == doctest::Approx(we.d2A).epsilon(1e-4));
    }
  }
  const WarpedSurface pea = WarpedSurface::build(SurfaceKind::Peanut, 1);
  for (double x : {0.6, 0.7, 0.85}) {  // inside the blend zone
    const WarpEval we = pea.warp(x);
    const double step = 1e-4;
    const double d1 = (pea.warpValue(x + step) - pea.warpValue(x - step)) / (2.0 * step);
    const double d2 =
        (pea.warpValue(x + step) - 2.0 * pea.warpValue(x) + pea.warpValue(x - step)) /
        (step * step);
    CHECK(d1 == doctest::Approx(we.dA).epsilon(1e-6));
    CHECK(d2 == doctest::Approx(we.d2A).epsilon(1e-4));
  }
}

TEST_CASE("torus neck flatness: first 2m-1 derivatives vanish, 2m-th matches") {
  for (int m : {1, 2, 3}) {
    const WarpedSurface s = WarpedSurface::build(SurfaceKind::TorusFamily, m);

    // Implemented warp agrees with the long-double oracle pointwise.
    for (double x : {0.02, 0.11, 0.47, 0.83}) {
      const long double oracleA = powl(torus_power_oracle(x, m), 1.0L / (2 * m));
      CHECK(s.warpValue(x) ==
            doctest::Approx(static_cast<double>(oracleA)).epsilon(1e-14));
    }

    // Low-order flatness of the implementation itself.
    auto fA = [&](long double d) -> long double { return s.warpValue(static_cast<double>(d)); };
    for (int k = 1; k < 2 * m; ++k) {
      const long double dk = central_derivative(fA, k, 0.05L);
      CHECK(std::fabs(static_cast<double>(dk)) < 1e-4);
    }

    // 2m-th derivative via the oracle: A = B^{1/2m} with B - 1 flat to order
    // 2m, so d^{2m}A(0) = d^{2m}B(0)/(2m); the local model (1+x^{2m})^{1/(2m)}
    // has d^{2m}A(0) = (2m-1)!.
    auto fB = [&](long double d) { return torus_power_oracle(d, m); };
    const long double d2m = central_derivative(fB, 2 * m, 0.01L) / (2 * m);
    const double expected = factorial(2 * m - 1);
    CHECK(static_cast<double>(d2m) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("build_surface rejects bad degeneracy orders") {
  CHECK_THROWS_AS(WarpedSurface::build(SurfaceKind::TorusFamily, 0), Error);
  CHECK_THROWS_AS(WarpedSurface::build(SurfaceKind::TorusFamily, -3), Error);
}

TEST_CASE("standard profiles satisfy the support contracts") {
  const ProfileSet ps = build_standard_profiles();

  CHECK(ps.a(0.0) == 0.0);
  CHECK(ps.a(0.75) == doctest::Approx(1.0).epsilon(1e-14));  // plateau
  CHECK(ps.a(0.2) == 0.0);                                   // inside the keep-out
  CHECK(ps.eps0 == doctest::Approx(1.0).epsilon(1e-12));

  // chi == 1 wherever a >= eps0, supp chi inside {a > eps0/2}
  for (double x = -1.0; x < 1.0; x += 1e-3) {
    if (ps.a(x) >= ps.eps0) CHECK(ps.chi(x) == doctest::Approx(1.0).epsilon(1e-14));
    if (ps.chi(x) > 0.0) CHECK(ps.a(x) > 0.5 * ps.eps0);
    CHECK(ps.a(x) >= 0.0);
    CHECK(ps.a(x) <= 1.0 + 1e-15);
  }

  // B1 == 1 on V1, supported inside O1; phi == 1 on supp grad B1, zero at the neck
  CHECK(ps.B1(0.0) == doctest::Approx(1.0));
  CHECK(ps.B1(0.1) == doctest::Approx(1.0));
  CHECK(ps.B1(0.3) == 0.0);
  CHECK(ps.a(ps.B1.support().outer) == 0.0);  // disjoint supports
  const double fdStep = 1e-4;
  for (double x = 0.0; x < 1.0; x += 1e-3) {
    const double grad = (ps.B1(x + fdStep) - ps.B1(x - fdStep)) / (2.0 * fdStep);
    if (std::fabs(grad) > 1e-8) CHECK(ps.phi(x) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(ps.phi(0.0) == 0.0);
  CHECK(ps.phi(0.02) == 0.0);
}

TEST_CASE("profiles are numerically C2: second divided differences converge") {
  const ProfileSet ps = build_standard_profiles();
  const double x = 0.35;  // inside the damping transition
  double prev = 1e300;
  double prevDiff = 1e300;
  for (double s : {1e-2, 1e-3, 1e-4}) {
    const double d2 = (ps.a(x + s) - 2.0 * ps.a(x) + ps.a(x - s)) / (s * s);
    if (prev != 1e300) {
      const double diff = std::fabs(d2 - prev);
      if (prevDiff != 1e300) CHECK(diff < prevDiff);
      prevDiff = diff;
    }
    prev = d2;
  }
}

TEST_CASE("make_profile enforces the forbidden zone") {
  CHECK_THROWS_AS(
      make_profile(ProfileName::Damping, 0.1, 0.3, 1.0, 1.0, 1.0, 1.0, 0.2), Error);
  CHECK_NOTHROW(make_profile(ProfileName::Damping, 0.3, 0.5, 1.0, 1.0, 1.0, 1.0, 0.2));
  try {
    make_profile(ProfileName::Absorption, 0.0, 0.1, 1.0, 1.0, 1.0, 1.0, 0.2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "invalid-support");
  }
}

TEST_CASE("uniform damping set for the controlled configuration") {
  const ProfileSet ps = build_uniform_damping(1.0);
  CHECK(ps.uniform);
  CHECK(ps.a(0.0) == doctest::Approx(1.0));
  CHECK(ps.a(0.99) == doctest::Approx(1.0));
  CHECK(ps.eps0 == doctest::Approx(1.0));
  CHECK(ps.B1(0.5) == 0.0);
}

TEST_CASE("smoothstep endpoints and the sharpness knob") {
  CHECK(smoothstep(-0.5) == 0.0);
  CHECK(smoothstep(1.5) == 1.0);
  CHECK(smoothstep(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(smoothstep(0.25, 0.2) > smoothstep(0.25, 1.0));  // softer foot
  // derivative consistency
  const double t = 0.37, s = 1e-6;
  CHECK(smoothstep_d1(t) ==
        doctest::Approx((smoothstep(t + s) - smoothstep(t - s)) / (2.0 * s)).epsilon(1e-7));
  CHECK(smoothstep_d2(t) ==
        doctest::Approx((smoothstep_d1(t + s) - smoothstep_d1(t - s)) / (2.0 * s)).epsilon(1e-6));
}
