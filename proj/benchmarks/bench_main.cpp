// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "dwlab/geodesic.hpp"
#include "dwlab/resolvent.hpp"
#include "dwlab/wave.hpp"

using namespace dwlab;

namespace {

const WarpedSurface& torus2() {
  static const WarpedSurface s = WarpedSurface::build(SurfaceKind::TorusFamily, 2);
  return s;
}

const ProfileSet& profiles() {
  static const ProfileSet ps = build_standard_profiles();
  return ps;
}

void BM_OperatorBuild(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Grid1D grid = build_grid(torus2(), N);
  for (auto _ : state) {
    ModeOperator op(torus2(), grid, profiles().W, 1.0 / 64, 64, OperatorKind::Absorbing);
    benchmark::DoNotOptimize(op.normUpperBound());
  }
}
BENCHMARK(BM_OperatorBuild)->Arg(512)->Arg(2048);

void BM_SigmaIterative(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Grid1D grid = build_grid(torus2(), N);
  const ModeOperator op(torus2(), grid, profiles().W, 1.0 / 64, 64, OperatorKind::Absorbing);
  const auto S = op.symmetrized(Complex(1.0, 0.0));
  SigmaOptions opts;
  opts.method = SigmaOptions::Method::Iterative;
  for (auto _ : state) benchmark::DoNotOptimize(smallest_singular_value(S, opts).sigma);
}
BENCHMARK(BM_SigmaIterative)->Arg(512)->Arg(1024)->Arg(2048);

void BM_SigmaDense(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Grid1D grid = build_grid(torus2(), N);
  const ModeOperator op(torus2(), grid, profiles().W, 1.0 / 64, 64, OperatorKind::Absorbing);
  const Eigen::MatrixXcd S(op.symmetrized(Complex(1.0, 0.0)));
  for (auto _ : state) benchmark::DoNotOptimize(dense_sigma_min(S));
}
BENCHMARK(BM_SigmaDense)->Arg(256)->Arg(512)->Arg(1024);

void BM_GeodesicFlow(benchmark::State& state) {
  const GeodesicState s0 = unit_state(torus2(), 0.1, 0.7);
  for (auto _ : state) {
    GeodesicState s = flow(s0, 10.0, torus2());
    benchmark::DoNotOptimize(s.x);
  }
}
BENCHMARK(BM_GeodesicFlow);

void BM_CrankNicolsonStep(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Grid1D grid = build_grid(torus2(), N);
  const WaveGenerator gen(torus2(), grid, profiles().a, 32);
  WaveState s = bump_state(gen, 0.0, 0.1);
  CrankNicolson cn(gen, 0.4 / gen.omegaMax());
  for (auto _ : state) {
    cn.step(s);
    benchmark::DoNotOptimize(s.u[0]);
  }
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(512)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
