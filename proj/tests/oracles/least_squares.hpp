// SPDX-License-Identifier: Apache-2.0
// Brute-force least-squares references for the alternating estimator. Both
// solve the full problem in one dense system instead of per column or via the
// real-stacked normal matrix.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// argmin_xi sum_j || q_j - W_j xi ||^2 with W_j = c conj(G) diag((G^T B)_j):
// stack all W_j into one (N*N) x K matrix and solve the complex normal
// equations.
inline CVector ComplexLsA(const CMatrix& Q, const CMatrix& G, const CMatrix& B,
                          double c) {
  const Eigen::Index N = G.rows();
  const Eigen::Index K = G.cols();
  CMatrix W(N * N, K);
  CVector q(N * N);
  const CMatrix V = G.transpose() * B;
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index n = 0; n < N; ++n) {
      for (Eigen::Index k = 0; k < K; ++k) {
        W(j * N + n, k) = c * std::conj(G(n, k)) * V(k, j);
      }
      q(j * N + n) = Q(n, j);
    }
  }
  const CMatrix normal = W.adjoint() * W;
  return normal.fullPivLu().solve(W.adjoint() * q);
}

// Minimum-norm argmin_B || Q - T B ||_F over the entries in `mask` (mask(i, j)
// true means B(i, j) is free), T = c conj(G) diag(a) G^T. Written as one
// (N*N)-unknown system vec(T B) = (I kron T) vec(B).
inline CMatrix DenseJointLsB(const CMatrix& Q, const CMatrix& G, const CVector& a,
                             double c, const Eigen::Matrix<bool, -1, -1>& mask) {
  const Eigen::Index N = G.rows();
  const CMatrix T = c * G.conjugate() * a.asDiagonal() * G.transpose();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> free;
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) {
      if (mask(i, j)) free.emplace_back(i, j);
    }
  }
  CMatrix big = CMatrix::Zero(N * N, static_cast<Eigen::Index>(free.size()));
  for (std::size_t u = 0; u < free.size(); ++u) {
    const auto [i, j] = free[u];
    big.block(j * N, static_cast<Eigen::Index>(u), N, 1) = T.col(i);
  }
  CVector q(N * N);
  for (Eigen::Index j = 0; j < N; ++j) q.segment(j * N, N) = Q.col(j);

  Eigen::JacobiSVD<CMatrix> svd(big, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const CVector x = svd.solve(q);
  CMatrix B = CMatrix::Zero(N, N);
  for (std::size_t u = 0; u < free.size(); ++u) {
    B(free[u].first, free[u].second) = x(static_cast<Eigen::Index>(u));
  }
  return B;
}

}  // namespace oracle
