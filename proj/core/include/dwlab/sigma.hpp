// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_SIGMA_HPP
#define DWLAB_SIGMA_HPP

#include <complex>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dwlab {

using Complex = std::complex<double>;

struct SigmaOptions {
  enum class Method { Auto, Dense, Iterative };
  Method method = Method::Auto;
  int denseSwitch = 1024;  // Auto: dense SVD at/below this size, iterative above
  double tol = 1e-12;      // Ritz residual tolerance relative to sigma
  int maxIter = 240;       // Lanczos steps before the dense fallback
  std::uint64_t seed = 0x5eed;
  bool denseFallback = true;  // stagnating iteration falls back to dense SVD
};

struct SigmaResult {
  double sigma = 0.0;
  bool converged = false;
  bool usedDense = false;
  bool singular = false;  // factorization failed; sigma reported as 0
  int iterations = 0;
};

/// Smallest singular value of a sparse complex matrix. Iterative route:
/// Golub-Kahan-Lanczos on S^{-1} through one SparseLU factorization (regular
/// and adjoint solves), fully reorthogonalized; stagnation past maxIter falls
/// back to the dense SVD when denseFallback is set.
SigmaResult smallest_singular_value(const Eigen::SparseMatrix<Complex>& S,
                                    const SigmaOptions& opts = {});

/// Dense routes via LAPACK zgesdd (singular values only).
double dense_sigma_min(const Eigen::MatrixXcd& S);
double dense_sigma_max(const Eigen::MatrixXcd& S);

/// Matrix-free composed map for cutoff resolvent norms.
struct LinearMap {
  int size = 0;
  std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)> apply;
  std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)> applyAdjoint;
};

/// Largest singular value by two-vector subspace iteration on B^* B.
SigmaResult largest_singular_value(const LinearMap& map, const SigmaOptions& opts = {});

}  // namespace dwlab

#endif
