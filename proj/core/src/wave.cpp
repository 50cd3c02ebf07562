// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/wave.hpp"

#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

WaveGenerator::WaveGenerator(const WarpedSurface& surface, const Grid1D& grid,
                             const Profile& damping, int n)
    : grid_(grid), n_(n) {
  (void)surface;
  if (n < 0) throw Error("invalid-parameter", "mode number must be >= 0");
  build();
  damping_.resize(grid_.n);
  for (int j = 0; j < grid_.n; ++j) damping_[j] = damping(grid_.x[j]);
}

WaveGenerator::WaveGenerator(const ModeOperator& op) : grid_(op.grid()), n_(op.modeNumber()) {
  if (op.h() != 1.0 || op.kind() != OperatorKind::Damped)
    throw Error("invalid-parameter",
                "wave generator adopts a damped mode operator built at h = 1");
  build();
  damping_.resize(grid_.n);
  for (int j = 0; j < grid_.n; ++j) damping_[j] = op.kindDiagonal()[j].imag();
}

void WaveGenerator::build() {
  const int N = grid_.n;
  const double dx2 = grid_.dx * grid_.dx;
  lapDiag_.resize(N);
  offRight_.resize(N);
  offLeft_.resize(N);
  for (int j = 0; j < N; ++j) {
    const int jm = (j + N - 1) % N;
    const double Aj = grid_.warp[j];
    const double Ap = grid_.warpHalf[j];
    const double Am = grid_.warpHalf[jm];
    lapDiag_[j] = (Ap + Am) / (Aj * dx2) + static_cast<double>(n_) * n_ / (Aj * Aj);
    offRight_[j] = -Ap / (Aj * dx2);
    offLeft_[j] = -Am / (Aj * dx2);
  }
}

void WaveGenerator::applyLaplacian(const Eigen::VectorXcd& u, Eigen::VectorXcd& out) const {
  const int N = grid_.n;
  if (u.size() != N) throw Error("length-mismatch", "vector size does not match the grid");
  out.resize(N);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    const int jm = (j + N - 1) % N;
    out[j] = lapDiag_[j] * u[j] + offRight_[j] * u[jp] + offLeft_[j] * u[jm];
  }
}

double WaveGenerator::omegaMax() const {
  double bound = 0.0;
  for (int j = 0; j < grid_.n; ++j)
    bound = std::max(bound, lapDiag_[j] + std::fabs(offRight_[j]) + std::fabs(offLeft_[j]));
  return std::sqrt(bound);
}

Eigen::MatrixXcd WaveGenerator::denseFirstOrderMatrix() const {
  const int N = grid_.n;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    const int jm = (j + N - 1) % N;
    G(j, N + j) = 1.0;
    G(N + j, j) = -lapDiag_[j];
    G(N + j, jp) = -offRight_[j];
    G(N + j, jm) = -offLeft_[j];
    G(N + j, N + j) = -damping_[j];
  }
  return G;
}

double wave_energy(const WaveState& state, const WaveGenerator& gen) {
  const Grid1D& g = gen.grid();
  const int N = g.n;
  double e = 0.0;
  for (int j = 0; j < N; ++j) e += g.w[j] * std::norm(state.v[j]);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    e += g.warpHalf[j] * std::norm(state.u[jp] - state.u[j]) / g.dx;
  }
  const double n2 = static_cast<double>(state.n) * state.n;
  if (n2 > 0.0)
    for (int j = 0; j < N; ++j) e += g.w[j] * n2 / (g.warp[j] * g.warp[j]) * std::norm(state.u[j]);
  return 0.5 * e;
}

double dissipated_power(const WaveState& state, const WaveGenerator& gen) {
  const Grid1D& g = gen.grid();
  double p = 0.0;
  for (int j = 0; j < g.n; ++j) p += g.w[j] * gen.damping()[j] * std::norm(state.v[j]);
  return p;
}

WaveState bump_state(const WaveGenerator& gen, double center, double width) {
  const Grid1D& g = gen.grid();
  WaveState s;
  s.n = gen.modeNumber();
  s.u = Eigen::VectorXcd::Zero(g.n);
  s.v.resize(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double d = wrap_to_cell(g.x[j] - center);
    s.v[j] = std::exp(-d * d / (2.0 * width * width));
  }
  if (s.n == 0) {
    Complex mean(0.0, 0.0);
    for (int j = 0; j < g.n; ++j) mean += g.w[j] * s.v[j];
    mean /= g.totalMeasure;
    for (int j = 0; j < g.n; ++j) s.v[j] -= mean;
  }
  return s;
}

CrankNicolson::CrankNicolson(const WaveGenerator& gen, double dt) : gen_(gen), dt_(dt) {
  if (dt <= 0.0) throw Error("invalid-parameter", "dt must be positive");
  const int N = gen.size();
  const double beta = 0.5 * dt;
  // Eliminating v gives [diag(1/beta + a) + beta Lap] u+ = rhs.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * N);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    const int jm = (j + N - 1) % N;
    trip.emplace_back(j, j, 1.0 / beta + gen.damping()[j] + beta * gen.lapDiag_[j]);
    trip.emplace_back(j, jp, beta * gen.offRight_[j]);
    trip.emplace_back(j, jm, beta * gen.offLeft_[j]);
  }
  Eigen::SparseMatrix<double> M(N, N);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();
  lu_.compute(M);
  if (lu_.info() != Eigen::Success)
    throw Error("scheme-error", "Crank-Nicolson matrix factorization failed");
}

void CrankNicolson::step(WaveState& state) const {
  const int N = gen_.size();
  const double beta = 0.5 * dt_;
  Eigen::VectorXcd Lu;
  gen_.applyLaplacian(state.u, Lu);

  Eigen::VectorXcd ru = state.u + beta * state.v;
  Eigen::VectorXcd rv(N);
  for (int j = 0; j < N; ++j)
    rv[j] = state.v[j] - beta * (Lu[j] + gen_.damping()[j] * state.v[j]);
  Eigen::VectorXcd rhs(N);
  for (int j = 0; j < N; ++j)
    rhs[j] = rv[j] + ru[j] / beta + gen_.damping()[j] * ru[j];

  Eigen::VectorXd re = lu_.solve(rhs.real());
  Eigen::VectorXd im = lu_.solve(rhs.imag());
  for (int j = 0; j < N; ++j) {
    const Complex up(re[j], im[j]);
    state.v[j] = (up - ru[j]) / beta;
    state.u[j] = up;
  }
  state.t += dt_;
}

EvolveResult evolve(WaveState& state, const WaveGenerator& gen, double dt, int steps,
                    int recordEvery) {
  if (dt * gen.omegaMax() > 0.5 + 1e-12)
    throw Error("invalid-timestep", "dt must resolve the fastest retained frequency");
  CrankNicolson cn(gen, dt);

  EvolveResult out;
  const double e0 = wave_energy(state, gen);
  double ePrev = e0;
  double pPrev = dissipated_power(state, gen);
  double defect = 0.0;
  out.t.push_back(state.t);
  out.energy.push_back(e0);
  out.power.push_back(pPrev);

  for (int k = 1; k <= steps; ++k) {
    cn.step(state);
    const double eNow = wave_energy(state, gen);
    const double pNow = dissipated_power(state, gen);
    defect += eNow - ePrev + 0.5 * dt * (pPrev + pNow);
    if (eNow > ePrev) {
      out.maxRelativeIncrease = std::max(out.maxRelativeIncrease, (eNow - ePrev) / e0);
      if (out.maxRelativeIncrease > 1e-10)
        throw Error("scheme-error", "energy increased beyond 1e-10 E(0)");
    }
    ePrev = eNow;
    pPrev = pNow;
    if (k % recordEvery == 0 || k == steps) {
      out.t.push_back(state.t);
      out.energy.push_back(eNow);
      out.power.push_back(pNow);
    }
  }
  out.dissipationResidual = std::fabs(defect) / e0;
  return out;
}

std::string to_string(DecayFitResult::Model model) {
  switch (model) {
    case DecayFitResult::Model::Exp: return "exp";
    case DecayFitResult::Model::ExpSqrt: return "exp-sqrt";
    case DecayFitResult::Model::PolyLog: return "poly-log";
  }
  return "?";
}

DecayFitResult fit_decay(const std::vector<double>& t, const std::vector<double>& energy,
                         DecayFitResult::Model model, double sParam, double qParam) {
  if (t.size() != energy.size() || t.size() < 3)
    throw Error("invalid-parameter", "decay fit needs matching traces with >= 3 points");
  for (size_t i = 1; i < energy.size(); ++i)
    if (energy[i] > energy[i - 1] * (1.0 + 1e-9))
      throw Error("nonmonotone-trace", "energy trace is not nonincreasing");

  auto templ = [&](double tt) {
    switch (model) {
      case DecayFitResult::Model::Exp: return tt;
      case DecayFitResult::Model::ExpSqrt: return std::sqrt(tt);
      case DecayFitResult::Model::PolyLog:
        return sParam * std::log(tt) - qParam * std::log(std::log(2.0 + tt));
    }
    return tt;
  };

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  double eFirst = 0.0, eLast = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (energy[i] <= 0.0) continue;
    if (model == DecayFitResult::Model::PolyLog && t[i] < 1.0) continue;
    const double x = templ(t[i]);
    const double y = std::log(energy[i]);
    if (n == 0) eFirst = energy[i];
    eLast = energy[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw Error("invalid-parameter", "decay fit has too few usable points");
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy * sxx - sx * sxy) / denom;

  DecayFitResult fit;
  fit.model = model;
  fit.rate = -slope;
  fit.intercept = intercept;
  fit.s = sParam;
  fit.q = qParam;
  double ss = 0.0;
  int m = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (energy[i] <= 0.0) continue;
    if (model == DecayFitResult::Model::PolyLog && t[i] < 1.0) continue;
    const double r = std::log(energy[i]) - (intercept + slope * templ(t[i]));
    ss += r * r;
    ++m;
  }
  fit.residual = std::sqrt(ss / m);
  fit.qualitative = eFirst <= 0.0 || eLast <= 0.0 || std::log10(eFirst / eLast) < 2.0;
  return fit;
}

}  // namespace dwlab
