// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "dwlab/errors.hpp"
#include "dwlab/rng.hpp"
#include "dwlab/wave.hpp"

using namespace dwlab;

namespace {

WaveState random_state(const WaveGenerator& gen, Rng& rng) {
  WaveState s;
  s.n = gen.modeNumber();
  s.u.resize(gen.size());
  s.v.resize(gen.size());
  for (int j = 0; j < gen.size(); ++j) {
    s.u[j] = rng.complexNormal();
    s.v[j] = rng.complexNormal();
  }
  return s;
}

}  // namespace

TEST_CASE("undamped generator: eigenfrequencies come in +-sqrt(mu) pairs") {
  const WarpedSurface flat = WarpedSurface::flat();
  const Grid1D g = build_grid(flat, 64);
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const WaveGenerator gen(flat, g, zero, 0);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(gen.denseFirstOrderMatrix());
  // generator eigenvalues are purely imaginary +- i sqrt(mu_k); spectrum is
  // symmetric under lambda -> -conj(lambda)
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex lam = es.eigenvalues()[i];
    CHECK(std::fabs(lam.real()) < 1e-6 * std::max(1.0, std::abs(lam)));
    bool foundMirror = false;
    for (int j = 0; j < es.eigenvalues().size(); ++j)
      if (std::abs(es.eigenvalues()[j] + std::conj(lam)) < 1e-8) {
        foundMirror = true;
        break;
      }
    CHECK(foundMirror);
  }
  // frequencies match the Laplacian spectrum
  const double mu1 = (2.0 / (g.dx * g.dx)) * (1.0 - std::cos(2.0 * M_PI / g.n));
  bool found = false;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i] - Complex(0.0, std::sqrt(mu1))) < 1e-8) found = true;
  CHECK(found);
}

TEST_CASE("constant (u, 0) is stationary for n = 0") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 128);
  const ProfileSet ps = build_standard_profiles();
  const WaveGenerator gen(t1, g, ps.a, 0);
  WaveState s;
  s.n = 0;
  s.u = Eigen::VectorXcd::Ones(g.n);
  s.v = Eigen::VectorXcd::Zero(g.n);
  CHECK(wave_energy(s, gen) < 1e-14);
  CrankNicolson cn(gen, 1e-3);
  cn.step(s);
  // rounding scale: the eliminated system carries 1/beta and 1/dx^2 entries
  CHECK((s.u - Eigen::VectorXcd::Ones(g.n)).norm() < 1e-10);
  CHECK(s.v.norm() < 1e-10);
}

TEST_CASE("energy: zero state, standing wave value, conservation without damping") {
  const WarpedSurface flat = WarpedSurface::flat();
  const Grid1D g = build_grid(flat, 256);
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const WaveGenerator gen(flat, g, zero, 0);

  WaveState null;
  null.n = 0;
  null.u = Eigen::VectorXcd::Zero(g.n);
  null.v = Eigen::VectorXcd::Zero(g.n);
  CHECK(wave_energy(null, gen) == 0.0);

  // standing wave u0 = 0, v0 = sin(pi k x): E = 1/4 * measure * amplitude^2
  WaveState sw;
  sw.n = 0;
  sw.u = Eigen::VectorXcd::Zero(g.n);
  sw.v.resize(g.n);
  for (int j = 0; j < g.n; ++j) sw.v[j] = std::sin(M_PI * 3.0 * g.x[j]);
  const double e0 = wave_energy(sw, gen);
  CHECK(e0 == doctest::Approx(0.25 * 2.0).epsilon(1e-12));

  const double dt = 0.4 / gen.omegaMax();
  const int steps = static_cast<int>(std::ceil(5.0 / dt));
  EvolveResult r = evolve(sw, gen, dt, steps, steps);
  CHECK(std::fabs(r.energy.back() - e0) / e0 < 1e-8);
}

TEST_CASE("uniform damping decays exponentially with a positive fitted rate") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 256);
  const ProfileSet uniform = build_uniform_damping(1.0);
  const WaveGenerator gen(t1, g, uniform.a, 0);
  WaveState s = bump_state(gen, 0.0, 0.1);
  const double dt = 0.4 / gen.omegaMax();
  const int steps = static_cast<int>(std::ceil(8.0 / dt));
  EvolveResult r = evolve(s, gen, dt, steps, std::max(1, steps / 200));
  const DecayFitResult fit = fit_decay(r.t, r.energy, DecayFitResult::Model::Exp);
  CHECK(fit.rate > 0.5);
  CHECK(fit.rate < 2.0);
}

TEST_CASE("dissipation identity residual is O(dt^2): halving gives ratio 4") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 128);
  const ProfileSet ps = build_standard_profiles();
  const WaveGenerator gen(t1, g, ps.a, 2);
  const double T = 2.0;
  std::vector<double> residuals;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    WaveState s = bump_state(gen, 0.4, 0.15);
    EvolveResult r = evolve(s, gen, dt, static_cast<int>(std::lround(T / dt)),
                            1 << 20);
    residuals.push_back(r.dissipationResidual);
  }
  CHECK(residuals[0] / residuals[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(residuals[1] / residuals[2] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("Crank-Nicolson step is an energy contraction for a >= 0") {
  Rng rng(17);
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 128);
  const ProfileSet ps = build_standard_profiles();
  const WaveGenerator gen(t1, g, ps.a, 3);
  CrankNicolson cn(gen, 1e-3);
  for (int trial = 0; trial < 20; ++trial) {
    WaveState s = random_state(gen, rng);
    const double before = wave_energy(s, gen);
    cn.step(s);
    CHECK(wave_energy(s, gen) <= before * (1.0 + 1e-12));
  }
}

TEST_CASE("evolve guards the timestep against the fastest retained frequency") {
  const WarpedSurface flat = WarpedSurface::flat();
  const Grid1D g = build_grid(flat, 128);
  const Profile zero(ProfileName::Damping, 0.0, 0.0, 0.0, 0.0, 0.0);
  const WaveGenerator gen(flat, g, zero, 0);
  WaveState s = bump_state(gen, 0.0, 0.1);
  CHECK_THROWS_AS(evolve(s, gen, 1.0 / gen.omegaMax(), 10), Error);
}

TEST_CASE("decay fits: synthetic exponential and exp-sqrt traces") {
  std::vector<double> t, e2, e3;
  for (int i = 0; i <= 200; ++i) {
    const double tt = 0.05 * i;
    t.push_back(tt);
    e2.push_back(std::exp(-2.0 * tt));
    e3.push_back(std::exp(-3.0 * std::sqrt(tt)));
  }
  const DecayFitResult f2 = fit_decay(t, e2, DecayFitResult::Model::Exp);
  CHECK(f2.rate == doctest::Approx(2.0).epsilon(0.005));
  CHECK(f2.residual < 1e-10);

  const DecayFitResult f3 = fit_decay(t, e3, DecayFitResult::Model::ExpSqrt);
  CHECK(f3.rate == doctest::Approx(3.0).epsilon(0.005));
  CHECK(f3.residual < 1e-10);
  const DecayFitResult f3exp = fit_decay(t, e3, DecayFitResult::Model::Exp);
  CHECK(f3exp.residual > 100.0 * f3.residual);

  std::vector<double> bad = e2;
  bad[50] = bad[49] * 2.0;
  CHECK_THROWS_AS(fit_decay(t, bad, DecayFitResult::Model::Exp), Error);
}

TEST_CASE("decay fits: poly-log template recovers the Sobolev power") {
  // E = (t^s / log^q(2+t))^{-sTilde} with the worked m=2 parameters.
  const double s = 3.0, q = 13.5, sTilde = 1.5;
  std::vector<double> t, e;
  // F = t^3/log^13.5(2+t) only turns increasing past t ~ e^4.5, so start at 100
  for (int i = 0; i <= 150; ++i) {
    const double tt = std::pow(10.0, 2.0 + 3.0 * i / 150.0);  // 100..1e5
    t.push_back(tt);
    e.push_back(std::exp(-sTilde * (s * std::log(tt) - q * std::log(std::log(2.0 + tt)))));
  }
  const DecayFitResult fit = fit_decay(t, e, DecayFitResult::Model::PolyLog, s, q);
  CHECK(fit.rate == doctest::Approx(sTilde).epsilon(1e-9));
  CHECK(fit.residual < 1e-10);
}

TEST_CASE("wave generator adopts a damped h=1 mode operator") {
  const WarpedSurface t1 = WarpedSurface::build(SurfaceKind::TorusFamily, 1);
  const Grid1D g = build_grid(t1, 128);
  const ProfileSet ps = build_standard_profiles();
  const ModeOperator op(t1, g, ps.a, 1.0, 4, OperatorKind::Damped);
  const WaveGenerator gen(op);
  CHECK(gen.modeNumber() == 4);
  for (int j = 0; j < g.n; ++j)
    CHECK(gen.damping()[j] == doctest::Approx(ps.a(g.x[j])).epsilon(1e-15));

  const ModeOperator scaled(t1, g, ps.a, 0.5, 4, OperatorKind::Damped);
  CHECK_THROWS_AS(WaveGenerator{scaled}, Error);
}
