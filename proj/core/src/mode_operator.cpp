// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/mode_operator.hpp"

#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Damped: return "damped";
    case OperatorKind::Absorbing: return "absorbing";
    case OperatorKind::Modified: return "modified";
  }
  return "?";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  if (name == "damped") return OperatorKind::Damped;
  if (name == "absorbing") return OperatorKind::Absorbing;
  if (name == "modified") return OperatorKind::Modified;
  throw Error("invalid-parameter", "unknown operator kind '" + name + "'");
}

ModeOperator::ModeOperator(const WarpedSurface& surface, const Grid1D& grid,
                           const Profile& coefficient, double h, int n, OperatorKind kind,
                           Complex z)
    : grid_(grid), h_(h), n_(n), kind_(kind) {
  (void)surface;
  if (!(h > 0.0 && h <= 1.0)) throw Error("invalid-parameter", "h must lie in (0, 1]");
  if (n < 0) throw Error("invalid-parameter", "mode number must be >= 0");
  if (kind == OperatorKind::Modified && z.real() <= 0.0)
    throw Error("branch-cut", "modified operator needs Re z > 0 for the principal sqrt");

  const int N = grid_.n;
  const double dx2 = grid_.dx * grid_.dx;
  lap_diag_.resize(N);
  off_right_.resize(N);
  off_left_.resize(N);
  off_sym_.resize(N);
  kind_diag_.resize(N);

  Complex shift(0.0, 0.0);
  Complex ih_sqrtz(0.0, 0.0);
  if (kind == OperatorKind::Modified) {
    build_z_ = z;
    shift = z;
    ih_sqrtz = Complex(0.0, h) * std::sqrt(z);
  }

  for (int j = 0; j < N; ++j) {
    const int jm = (j + N - 1) % N;
    const double Aj = grid_.warp[j];
    const double Ap = grid_.warpHalf[j];   // A(x_j + dx/2)
    const double Am = grid_.warpHalf[jm];  // A(x_j - dx/2)
    const double hn = h * n;
    lap_diag_[j] = h * h * (Ap + Am) / (Aj * dx2) + hn * hn / (Aj * Aj);
    off_right_[j] = -h * h * Ap / (Aj * dx2);
    off_left_[j] = -h * h * Am / (Aj * dx2);

    const double coeff = coefficient(grid_.x[j]);
    switch (kind) {
      case OperatorKind::Damped:
        kind_diag_[j] = Complex(0.0, h * coeff);
        break;
      case OperatorKind::Absorbing:
        kind_diag_[j] = Complex(0.0, coeff);
        break;
      case OperatorKind::Modified:
        kind_diag_[j] = ih_sqrtz * coeff - shift;
        break;
    }
  }
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    off_sym_[j] = -h * h * grid_.warpHalf[j] / (dx2 * std::sqrt(grid_.warp[j] * grid_.warp[jp]));
  }
}

void ModeOperator::apply(const Eigen::VectorXcd& u, Eigen::VectorXcd& out) const {
  const int N = grid_.n;
  if (u.size() != N) throw Error("length-mismatch", "vector size does not match the grid");
  out.resize(N);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    const int jm = (j + N - 1) % N;
    out[j] = (lap_diag_[j] + kind_diag_[j]) * u[j] + off_right_[j] * u[jp] + off_left_[j] * u[jm];
  }
}

Eigen::VectorXcd ModeOperator::apply(const Eigen::VectorXcd& u) const {
  Eigen::VectorXcd out;
  apply(u, out);
  return out;
}

void ModeOperator::applyReal(const Eigen::VectorXcd& u, Eigen::VectorXcd& out) const {
  const int N = grid_.n;
  if (u.size() != N) throw Error("length-mismatch", "vector size does not match the grid");
  out.resize(N);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    const int jm = (j + N - 1) % N;
    out[j] = lap_diag_[j] * u[j] + off_right_[j] * u[jp] + off_left_[j] * u[jm];
  }
}

Eigen::SparseMatrix<Complex> ModeOperator::symmetrized(Complex z) const {
  const int N = grid_.n;
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(3 * N);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    trip.emplace_back(j, j, Complex(lap_diag_[j], 0.0) + kind_diag_[j] - z);
    trip.emplace_back(j, jp, Complex(off_sym_[j], 0.0));
    trip.emplace_back(jp, j, Complex(off_sym_[j], 0.0));
  }
  Eigen::SparseMatrix<Complex> S(N, N);
  S.setFromTriplets(trip.begin(), trip.end());
  S.makeCompressed();
  return S;
}

Eigen::MatrixXcd ModeOperator::dense(Complex z) const {
  const int N = grid_.n;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    const int jm = (j + N - 1) % N;
    M(j, j) = lap_diag_[j] + kind_diag_[j] - z;
    M(j, jp) = off_right_[j];
    M(j, jm) = off_left_[j];
  }
  return M;
}

double ModeOperator::normUpperBound() const {
  double bound = 0.0;
  for (int j = 0; j < grid_.n; ++j) {
    const double row = std::abs(Complex(lap_diag_[j], 0.0) + kind_diag_[j]) +
                       std::fabs(off_right_[j]) + std::fabs(off_left_[j]);
    bound = std::max(bound, row);
  }
  return bound;
}

std::vector<std::tuple<int, int, double, double>> ModeOperator::triplets(Complex z) const {
  std::vector<std::tuple<int, int, double, double>> out;
  const int N = grid_.n;
  out.reserve(3 * N);
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    const int jm = (j + N - 1) % N;
    const Complex d = lap_diag_[j] + kind_diag_[j] - z;
    out.emplace_back(j, j, d.real(), d.imag());
    out.emplace_back(j, jp, off_right_[j], 0.0);
    out.emplace_back(j, jm, off_left_[j], 0.0);
  }
  return out;
}

Complex weighted_inner(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, const Grid1D& grid) {
  if (u.size() != v.size() || u.size() != grid.n)
    throw Error("length-mismatch", "weighted_inner needs equal lengths matching the grid");
  Complex acc(0.0, 0.0);
  for (int j = 0; j < grid.n; ++j) acc += grid.w[j] * u[j] * std::conj(v[j]);
  return acc;
}

double weighted_norm(const Eigen::VectorXcd& u, const Grid1D& grid) {
  if (u.size() != grid.n)
    throw Error("length-mismatch", "weighted_norm needs length matching the grid");
  double acc = 0.0;
  for (int j = 0; j < grid.n; ++j) acc += grid.w[j] * std::norm(u[j]);
  return std::sqrt(acc);
}

double stationary_identity_residual(const ModeOperator& op, const Eigen::VectorXcd& u, Complex z) {
  if (op.kind() != OperatorKind::Damped)
    throw Error("invalid-parameter", "stationary identity is stated for the damped kind");
  const Grid1D& grid = op.grid();
  const Eigen::VectorXcd shifted = op.apply(u) - z * u;
  const double lhs = weighted_inner(shifted, u, grid).imag();
  const double norm2 = std::pow(weighted_norm(u, grid), 2);
  double damp_quad = 0.0;  // h <a u, u> = sum w_j (h a_j) |u_j|^2
  for (int j = 0; j < grid.n; ++j)
    damp_quad += grid.w[j] * op.kindDiagonal()[j].imag() * std::norm(u[j]);
  return std::fabs(lhs - damp_quad + z.imag() * norm2) / (norm2 + 1e-300);
}

}  // namespace dwlab
