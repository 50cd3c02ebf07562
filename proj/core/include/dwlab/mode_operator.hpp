// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_MODE_OPERATOR_HPP
#define DWLAB_MODE_OPERATOR_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dwlab/geometry.hpp"
#include "dwlab/grid.hpp"

namespace dwlab {

using Complex = std::complex<double>;

enum class OperatorKind {
  Damped,     // h^2 Lap_n + i h a
  Absorbing,  // h^2 Lap_n + i W
  Modified,   // h^2 Lap_n + i h sqrt(z) a - z
};

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

/// One angular mode of the operator family on the weighted grid. The mode
/// Laplacian for f(x) e^{i n theta} is discretized in symmetric flux form,
///   (Lap_n f)_j = -(A_{j+1/2}(f_{j+1}-f_j) - A_{j-1/2}(f_j-f_{j-1})) / (A_j dx^2)
///                 + (n^2/A_j^2) f_j,
/// which is exactly self-adjoint in the w-weighted inner product. The skew part
/// is exactly i h diag(a) (damped), i diag(W) (absorbing), or i h sqrt(z) diag(a)
/// (modified, principal branch, Re z > 0).
class ModeOperator {
 public:
  ModeOperator(const WarpedSurface& surface, const Grid1D& grid, const Profile& coefficient,
               double h, int n, OperatorKind kind, Complex z = Complex(0.0, 0.0));

  int size() const { return grid_.n; }
  double h() const { return h_; }
  int modeNumber() const { return n_; }
  OperatorKind kind() const { return kind_; }
  /// The z baked into a Modified operator (0 for the other kinds).
  Complex buildShift() const { return build_z_; }
  const Grid1D& grid() const { return grid_; }

  void apply(const Eigen::VectorXcd& u, Eigen::VectorXcd& out) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;

  /// Action of the real part h^2 Lap_n alone (used by the wave generator).
  void applyReal(const Eigen::VectorXcd& u, Eigen::VectorXcd& out) const;

  /// Weighted symmetrization D^{1/2} (M - z I) D^{-1/2}, D = diag(w); sparse
  /// tridiagonal plus periodic corners. Its smallest singular value is the
  /// reciprocal resolvent norm in the weighted space.
  Eigen::SparseMatrix<Complex> symmetrized(Complex z) const;

  Eigen::MatrixXcd dense(Complex z = Complex(0.0, 0.0)) const;

  /// Diagonal of the imaginary (skew) part: h a_j, W_j, or h Re/Im sqrt(z) a_j.
  const Eigen::VectorXcd& kindDiagonal() const { return kind_diag_; }
  /// Real Laplacian diagonal including the (hn)^2/A^2 centrifugal term.
  const Eigen::VectorXd& realDiagonal() const { return lap_diag_; }
  /// Crude upper bound for the operator norm (Gershgorin row sums).
  double normUpperBound() const;

  /// Triplet dump (row, col, re, im) of the full matrix M - z I.
  std::vector<std::tuple<int, int, double, double>> triplets(Complex z = Complex(0, 0)) const;

 private:
  Grid1D grid_;
  double h_;
  int n_;
  OperatorKind kind_;
  Complex build_z_{0.0, 0.0};
  Eigen::VectorXd lap_diag_;   // real diagonal of h^2 Lap_n
  Eigen::VectorXd off_right_;  // entry (j, j+1), real
  Eigen::VectorXd off_left_;   // entry (j, j-1), real
  Eigen::VectorXd off_sym_;    // symmetrized off-diagonal between j and j+1
  Eigen::VectorXcd kind_diag_; // imaginary/kind-dependent diagonal addition
};

/// Weighted pairing sum w_j u_j conj(v_j); throws Error("length-mismatch").
Complex weighted_inner(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, const Grid1D& grid);
double weighted_norm(const Eigen::VectorXcd& u, const Grid1D& grid);

/// |Im<(P-z)u,u> - h<au,u> + (Im z)||u||^2| / (||u||^2 + tiny); an exact
/// algebraic identity of the damped discretization, so the return should sit
/// at rounding level. Requires kind == Damped.
double stationary_identity_residual(const ModeOperator& op, const Eigen::VectorXcd& u, Complex z);

}  // namespace dwlab

#endif
