// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_WAVE_HPP
#define DWLAB_WAVE_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "dwlab/mode_operator.hpp"

namespace dwlab {

/// First-order form of one angular mode of the damped wave equation:
/// d/dt (u, v) = (v, -Lap_n u - a v), with Lap_n the unscaled (h = 1) mode
/// Laplacian in flux form.
class WaveGenerator {
 public:
  WaveGenerator(const WarpedSurface& surface, const Grid1D& grid, const Profile& damping, int n);
  /// Adopts the Laplacian of a damped ModeOperator; requires h == 1.
  explicit WaveGenerator(const ModeOperator& op);

  int size() const { return grid_.n; }
  int modeNumber() const { return n_; }
  const Grid1D& grid() const { return grid_; }
  const Eigen::VectorXd& damping() const { return damping_; }

  void applyLaplacian(const Eigen::VectorXcd& u, Eigen::VectorXcd& out) const;

  /// Largest-frequency bound sqrt(lambda_max(Lap_n)) from Gershgorin rows.
  double omegaMax() const;

  /// Dense 2N x 2N matrix G with d/dt (u, v) = G (u, v); its eigenvalues are
  /// i * (spectrum of the evolution generator). Small N diagnostics only.
  Eigen::MatrixXcd denseFirstOrderMatrix() const;

 private:
  friend class CrankNicolson;
  void build();  // Laplacian arrays are fully determined by the grid

  Grid1D grid_;
  int n_ = 0;
  Eigen::VectorXd lapDiag_, offRight_, offLeft_;
  Eigen::VectorXd damping_;
};

struct WaveState {
  int n = 0;
  Eigen::VectorXcd u;
  Eigen::VectorXcd v;
  double t = 0.0;
};

/// Mode energy 1/2 (||v||_w^2 + flux-form Dirichlet quadrature of u); exactly
/// dissipated at rate <a v, v>_w by the semi-discrete flow.
double wave_energy(const WaveState& state, const WaveGenerator& gen);
double dissipated_power(const WaveState& state, const WaveGenerator& gen);

/// Gaussian-bump initial data u = 0, v = exp(-(x-center)^2/(2 width^2)); the
/// mode-0 weighted mean of v is projected out so the undamped constant mode
/// never pollutes decay fits.
WaveState bump_state(const WaveGenerator& gen, double center, double width);

/// One Crank-Nicolson step of the first-order system; unconditionally stable
/// and energy-contractive for a >= 0. The implicit matrix is factored once.
class CrankNicolson {
 public:
  CrankNicolson(const WaveGenerator& gen, double dt);
  void step(WaveState& state) const;
  double dt() const { return dt_; }

 private:
  const WaveGenerator& gen_;
  double dt_ = 0.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

struct EvolveResult {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> power;       // <a v, v>_w at the recorded times
  double dissipationResidual = 0.0;  // |E(T)-E(0)+trapezoid| / E(0), O(dt^2)
  double maxRelativeIncrease = 0.0;  // largest per-step energy uptick / E(0)
};

/// Evolves steps of size dt recording the energy trace. Requires
/// dt * omegaMax <= 0.5 (Error("invalid-timestep")); an energy increase beyond
/// 1e-10 E(0) raises Error("scheme-error").
EvolveResult evolve(WaveState& state, const WaveGenerator& gen, double dt, int steps,
                    int recordEvery = 1);

struct DecayFitResult {
  enum class Model { Exp, ExpSqrt, PolyLog };
  Model model = Model::Exp;
  double rate = 0.0;       // coefficient of the template
  double intercept = 0.0;  // log E offset
  double residual = 0.0;   // RMS of log E misfit
  bool qualitative = false;  // trace spans < 2 decades of decay
  double s = 0.0, q = 0.0;   // poly-log template parameters
};

std::string to_string(DecayFitResult::Model model);

/// Least-squares fit of log E against the model template (t, sqrt(t), or
/// s log t - q log log(2+t)). Throws Error("nonmonotone-trace") when the trace
/// rises beyond rounding.
DecayFitResult fit_decay(const std::vector<double>& t, const std::vector<double>& energy,
                         DecayFitResult::Model model, double sParam = 0.0, double qParam = 0.0);

}  // namespace dwlab

#endif
