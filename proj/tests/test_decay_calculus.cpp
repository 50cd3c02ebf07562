// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "dwlab/decay_calculus.hpp"
#include "dwlab/errors.hpp"

using namespace dwlab;

namespace {

ScalingFit synthetic(ScalingFit::Model model, double coeff, double normExponent) {
  ScalingFit f;
  f.model = model;
  f.coeff = coeff;
  f.exponent = normExponent;
  f.hMin = 1.0 / 128;
  f.hMax = 1.0 / 16;
  return f;
}

}  // namespace

TEST_CASE("constant P saturates with the forced exponential") {
  // P == p0, k = 2: the saturation F^{3/2} = e^{p0 t} forces F = e^{2 p0 t / 3}.
  const double p0 = 0.7;
  const ResolventGrowth g = alpha_to_G_P(synthetic(ScalingFit::Model::Power, 1.0, -1.0), p0);
  CHECK(g.shape == "constant");
  CHECK(g.N == 0.0);
  const DecayProfile prof = rate_from_resolvent(g, 2, 1.0, 1e6, 61);
  for (size_t i = 0; i < prof.t.size(); ++i) {
    const double expected = 2.0 * p0 * prof.t[i] / 3.0;
    CHECK(std::fabs(prof.logF[i] - expected) < 1e-9 * std::max(1.0, expected));
  }
  CHECK(prof.maxResidual <= 1e-12 * std::max(1.0, p0 * 1e6));
}

TEST_CASE("log loss: F = exp(sqrt(t)/C) satisfies the decay condition on [1, 1e6]") {
  const auto PofLog = [](double L) { return 1.0 / L; };  // P(r) = 1/log(r)
  const double C = 1.3;                                  // needs C^2 >= 1.5
  for (int i = 0; i <= 240; ++i) {
    const double t = std::pow(10.0, 6.0 * i / 240.0);
    CHECK(fcond_residual_log(t, std::sqrt(t) / C, 2, PofLog) <= 0.0);
  }
  // and the numeric saturating profile stays feasible and monotone
  const ResolventGrowth g = alpha_to_G_P(synthetic(ScalingFit::Model::Log, 1.0, 0.0), 1.0);
  const DecayProfile prof = rate_from_resolvent(g, 2);
  CHECK(prof.maxResidual <= 1e-12 * std::max(1.0, 1e6));
  for (size_t i = 1; i < prof.logF.size(); ++i) CHECK(prof.logF[i] >= prof.logF[i - 1]);
}

TEST_CASE("degenerate m=2 constants: s=3, q=13.5 pass the condition on [1, 1e6]") {
  // P(r) = r^{-1/3} from alpha = h^{-1/3}; the worked profile t^3 / log^{13.5}.
  const auto PofLog = [](double L) { return std::exp(-L / 3.0); };
  const double s = 3.0;   // (m+1)/(m-1)
  const double q = 13.5;  // 3(m+1)^2 / (2(m-1)^2)
  for (int i = 0; i <= 240; ++i) {
    const double t = std::pow(10.0, 6.0 * i / 240.0);
    const double logF = s * std::log(t) - q * std::log(std::log(2.0 + t));
    CHECK(fcond_residual_log(t, logF, 2, PofLog) <= 0.0);
  }
}

TEST_CASE("moderate-range residuals agree between the two evaluation forms") {
  const auto P = [](double r) { return std::pow(r, -1.0 / 3.0); };
  const auto PofLog = [](double L) { return std::exp(-L / 3.0); };
  for (double t : {1.0, 5.0, 20.0}) {
    const double F = 2.0 + t;
    CHECK(fcond_residual(t, F, 2, P) ==
          doctest::Approx(fcond_residual_log(t, std::log(F), 2, PofLog)).epsilon(1e-12));
  }
}

TEST_CASE("regularity gate: k must exceed N + 1") {
  const ResolventGrowth g =
      alpha_to_G_P(synthetic(ScalingFit::Model::Power, 1.0, -4.0 / 3.0), 0.5);  // N = 1/3
  CHECK(g.N == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(g.shape == "power");
  CHECK_THROWS_AS(rate_from_resolvent(g, 1), Error);
  try {
    rate_from_resolvent(g, 1);
  } catch (const Error& e) {
    CHECK(e.code() == "regularity-insufficient");
  }
  CHECK_NOTHROW(rate_from_resolvent(g, 2, 1.0, 1e4, 41));
}

TEST_CASE("alpha conversion: G and P shapes for the three canonical losses") {
  const ResolventGrowth cst = alpha_to_G_P(synthetic(ScalingFit::Model::Power, 2.0, -1.0), 0.5);
  CHECK(cst.G(10.0) == doctest::Approx(2.0));
  CHECK(cst.P(10.0) == doctest::Approx(0.25));

  const ResolventGrowth lg = alpha_to_G_P(synthetic(ScalingFit::Model::Log, 1.5, 0.0), 0.5);
  CHECK(lg.G(100.0) == doctest::Approx(1.5 * std::log(102.0)).epsilon(1e-12));
  CHECK(lg.P(100.0) == doctest::Approx(0.5 / (1.5 * std::log(102.0))).epsilon(1e-12));
  CHECK(lg.shape == "log");

  const ResolventGrowth pw = alpha_to_G_P(synthetic(ScalingFit::Model::Power, 1.0, -1.5), 0.5);
  CHECK(pw.N == doctest::Approx(0.5));
  CHECK(pw.G(16.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(pw.P(16.0) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK_FALSE(pw.weakMode);

  // weak mode trips past the threshold and squares the loss
  const ResolventGrowth weak =
      alpha_to_G_P(synthetic(ScalingFit::Model::Power, 1.0, -12.0), 0.5, 8.0);
  CHECK(weak.weakMode);
  CHECK(weak.N == doctest::Approx(22.0));
}

TEST_CASE("monotone F with nonpositive residual across shapes; energy bound interpolates") {
  for (double e : {-1.0, -4.0 / 3.0, -1.5}) {
    const ResolventGrowth g = alpha_to_G_P(synthetic(ScalingFit::Model::Power, 1.0, e), 0.5);
    const DecayProfile prof = rate_from_resolvent(g, 2, 1.0, 1e5, 81);
    for (size_t i = 1; i < prof.logF.size(); ++i) CHECK(prof.logF[i] >= prof.logF[i - 1]);
    CHECK(prof.maxResidual <= 1e-12 * std::max(1.0, 0.5 * 1e5));
    const double full = prof.energyBound(100.0, 2.0);
    const double half = prof.energyBound(100.0, 1.0);
    CHECK(full == doctest::Approx(half * half).epsilon(1e-9));
    CHECK_THROWS_AS(prof.energyBound(100.0, 3.0), Error);
  }
}
