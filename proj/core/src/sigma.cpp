// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/sigma.hpp"

#include <cmath>
#include <vector>

#include <Eigen/SparseLU>
#include <lapacke.h>

#include "dwlab/errors.hpp"
#include "dwlab/rng.hpp"

namespace dwlab {

namespace {

std::vector<double> zgesdd_values(Eigen::MatrixXcd A) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  std::vector<double> s(std::min(m, n));
  const int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n,
                                  reinterpret_cast<lapack_complex_double*>(A.data()), m,
                                  s.data(), nullptr, m, nullptr, n);
  if (info != 0) throw Error("svd-failure", "zgesdd returned info=" + std::to_string(info));
  return s;
}

Eigen::VectorXcd random_unit(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.complexNormal();
  v.normalize();
  return v;
}

// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization:
// estimates the largest singular value of the map B given by apply/applyAdjoint.
// The Ritz value increases monotonically; convergence is declared on the
// standard residual bound beta_{k+1} |e_k^T w| <= tol * sigma.
struct GklOut {
  double sigmaMax = 0.0;
  bool converged = false;
  int iterations = 0;
};

template <typename Apply, typename ApplyAdjoint>
GklOut gkl_sigma_max(int n, Apply&& apply, ApplyAdjoint&& applyAdjoint,
                     const SigmaOptions& opts) {
  const int kMax = std::min(n, std::max(8, opts.maxIter));
  Eigen::MatrixXcd U(n, kMax + 1), V(n, kMax);
  std::vector<double> alpha(kMax, 0.0), beta(kMax + 1, 0.0);

  U.col(0) = random_unit(n, opts.seed);
  Eigen::VectorXcd r(n), p(n);
  GklOut out;

  auto ritz_check = [&](int kk) {
    Eigen::MatrixXd Bd = Eigen::MatrixXd::Zero(kk, kk);
    for (int i = 0; i < kk; ++i) {
      Bd(i, i) = alpha[i];
      if (i + 1 < kk) Bd(i, i + 1) = beta[i + 1];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bd, Eigen::ComputeThinV);
    const double sigma = svd.singularValues()(0);
    out.sigmaMax = sigma;
    out.iterations = kk;
    const double res = beta[kk] * std::fabs(svd.matrixV()(kk - 1, 0));
    return res <= opts.tol * sigma;
  };

  for (int k = 0; k < kMax; ++k) {
    applyAdjoint(U.col(k), r);
    if (k > 0) {
      r -= beta[k] * V.col(k - 1);
      // two-pass reorthogonalization against V
      r -= V.leftCols(k) * (V.leftCols(k).adjoint() * r);
      r -= V.leftCols(k) * (V.leftCols(k).adjoint() * r);
    }
    alpha[k] = r.norm();
    if (alpha[k] == 0.0) {
      out.converged = true;
      out.iterations = k;
      return out;
    }
    V.col(k) = r / alpha[k];

    apply(V.col(k), p);
    p -= alpha[k] * U.col(k);
    p -= U.leftCols(k + 1) * (U.leftCols(k + 1).adjoint() * p);
    p -= U.leftCols(k + 1) * (U.leftCols(k + 1).adjoint() * p);
    beta[k + 1] = p.norm();

    const int kk = k + 1;
    const bool breakdown = beta[kk] < 1e-300;
    if (breakdown || kk == kMax || (kk >= 6 && kk % 2 == 0)) {
      if (ritz_check(kk) || breakdown) {
        out.converged = true;
        return out;
      }
    }
    if (breakdown) {
      out.converged = true;
      return out;
    }
    U.col(k + 1) = p / beta[k + 1];
  }
  return out;
}

}  // namespace

double dense_sigma_min(const Eigen::MatrixXcd& S) { return zgesdd_values(S).back(); }

double dense_sigma_max(const Eigen::MatrixXcd& S) { return zgesdd_values(S).front(); }

SigmaResult smallest_singular_value(const Eigen::SparseMatrix<Complex>& S,
                                    const SigmaOptions& opts) {
  const int n = static_cast<int>(S.rows());
  SigmaResult res;

  const bool want_dense =
      opts.method == SigmaOptions::Method::Dense ||
      (opts.method == SigmaOptions::Method::Auto && n <= opts.denseSwitch);
  if (want_dense) {
    res.sigma = dense_sigma_min(Eigen::MatrixXcd(S));
    res.converged = true;
    res.usedDense = true;
    return res;
  }

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success) {
    res.sigma = 0.0;
    res.singular = true;
    res.converged = true;
    return res;
  }

  // sigma_min(S) = 1 / sigma_max(S^{-1}).
  GklOut out = gkl_sigma_max(
      n, [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y = lu.solve(x); },
      [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y = lu.adjoint().solve(x); },
      opts);
  res.iterations = out.iterations;
  res.converged = out.converged;

  if (!out.converged && opts.denseFallback) {
    res.sigma = dense_sigma_min(Eigen::MatrixXcd(S));
    res.converged = true;
    res.usedDense = true;
    return res;
  }
  res.sigma = out.sigmaMax > 0.0 ? 1.0 / out.sigmaMax : 0.0;
  if (res.sigma == 0.0) res.singular = true;
  return res;
}

SigmaResult largest_singular_value(const LinearMap& map, const SigmaOptions& opts) {
  SigmaResult res;
  GklOut out = gkl_sigma_max(
      map.size, [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { map.apply(x, y); },
      [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { map.applyAdjoint(x, y); }, opts);
  res.iterations = out.iterations;
  res.converged = out.converged;
  res.sigma = out.sigmaMax;
  return res;
}

}  // namespace dwlab
