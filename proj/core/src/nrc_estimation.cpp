// SPDX-License-Identifier: Apache-2.0

#include "nrc/nrc_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace nrc {
namespace {

constexpr double kPinvThreshold = 1e-12;

void CheckInputs(const CMatrix& Q, const CMatrix& G_hat, double rho_u,
                 double rho_d) {
  const Eigen::Index N = G_hat.rows();
  if (N < G_hat.cols()) throw DimensionError("estimation needs N >= K");
  RequireShape(Q, N, N, "estimation Q");
  if (!(rho_u > 0.0) || !(rho_d > 0.0)) {
    throw ParameterError("pilot SNRs must be positive");
  }
}

}  // namespace

CMatrix GenPilotMatrix(int N) {
  if (N < 1) throw DimensionError("pilot matrix needs N >= 1");
  CMatrix X(N, N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      // Reduce the exponent mod N first to keep the phase argument small.
      const long long e = (static_cast<long long>(r) * c) % N;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(e) / N;
      X(r, c) = scale * cd(std::cos(phase), std::sin(phase));
    }
  }
  return X;
}

RoundTrip Roundtrip(const CMatrix& G, const CMatrix& H, const CMatrix& X,
                    double rho_tilde_d, double rho_tilde_u, Rng& rng,
                    bool noise) {
  const Eigen::Index N = G.rows();
  const Eigen::Index K = G.cols();
  RequireShape(H, K, N, "round trip H");
  RequireShape(X, N, N, "round trip pilot");
  RoundTrip rt;
  const CMatrix Zd = noise ? rng.ComplexNormalMatrix(K, N) : CMatrix::Zero(K, N);
  const CMatrix Zu = noise ? rng.ComplexNormalMatrix(N, N) : CMatrix::Zero(N, N);
  rt.R = std::sqrt(rho_tilde_d) * (H * X) + Zd;
  rt.Y = std::sqrt(rho_tilde_u) * (G * rt.R.conjugate()) + Zu;
  rt.Z_total = std::sqrt(rho_tilde_u) * (G * Zd.conjugate()) + Zu;
  return rt;
}

ProcessedObservation ProcessObservation(const CMatrix& Y, const CMatrix& X,
                                        double rho_tilde_u, double rho_tilde_d,
                                        int subcarrier_index) {
  RequireShape(Y, X.rows(), X.rows(), "processed observation Y");
  ProcessedObservation obs;
  obs.Q = Y.conjugate() * X.adjoint();
  obs.rho_tilde_u = rho_tilde_u;
  obs.rho_tilde_d = rho_tilde_d;
  obs.subcarrier_index = subcarrier_index;
  return obs;
}

AlternatingSolver::AlternatingSolver(const CMatrix& Q, const CMatrix& G_hat,
                                     const SparsitySupport& support,
                                     double rho_tilde_u, double rho_tilde_d)
    : G_(G_hat), support_(support) {
  CheckInputs(Q, G_hat, rho_tilde_u, rho_tilde_d);
  if (support.size() != G_hat.rows()) {
    throw DimensionError("estimation: support size differs from N");
  }
  const Eigen::Index N = G_hat.rows();
  const Eigen::Index K = G_hat.cols();
  c_ = std::sqrt(rho_tilde_u * rho_tilde_d);
  Eigen::HouseholderQR<CMatrix> qr(G_hat.conjugate());
  Qg_ = qr.householderQ() * CMatrix::Identity(N, K);
  Rg_ = qr.matrixQR().topRows(K).triangularView<Eigen::Upper>();
  QgQ_ = Qg_.adjoint() * Q;
  GtQ_ = G_hat.transpose() * Q;
  gram_ = G_hat.transpose() * G_hat.conjugate();
  perp_ = (Q - Qg_ * QgQ_).squaredNorm();
}

CMatrix AlternatingSolver::GtB(const CMatrix& B_hat) const {
  const Eigen::Index N = G_.rows();
  RequireShape(B_hat, N, N, "estimation B_hat");
  CMatrix V = CMatrix::Zero(G_.cols(), N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (int i : support_.Rows(static_cast<int>(j))) {
      V.col(j) += G_.row(i).transpose() * B_hat(i, j);
    }
  }
  return V;
}

template <typename Small>
bool AlternatingSolver::SolveColumn(const CMatrix& M, const std::vector<int>& rows,
                                    Eigen::Index j, CMatrix& B) const {
  const Eigen::Index K = M.rows();
  const Eigen::Index R = static_cast<Eigen::Index>(rows.size());
  CMatrix Mj(K, R);
  for (Eigen::Index r = 0; r < R; ++r) Mj.col(r) = M.col(rows[r]);
  // Mj = Qj Rj; the SVD of the small triangle carries the same spectrum.
  Eigen::HouseholderQR<CMatrix> qr(Mj);
  const Eigen::Index r_rows = std::min(K, R);
  CVector rhs = QgQ_.col(j);
  rhs.applyOnTheLeft(qr.householderQ().adjoint());
  const Small Rj = qr.matrixQR().topRows(r_rows).template triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Small> svd(Rj, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kPinvThreshold);
  using SmallVector = Eigen::Matrix<cd, Eigen::Dynamic, 1, 0,
                                    Small::MaxRowsAtCompileTime, 1>;
  const SmallVector b = rhs.head(r_rows);
  const SmallVector x = svd.solve(b);
  for (Eigen::Index r = 0; r < R; ++r) B(rows[r], j) = x(r);
  return svd.rank() < R;
}

CMatrix AlternatingSolver::BStep(const CVector& a_hat,
                                 std::vector<int>* deficient) const {
  const Eigen::Index N = G_.rows();
  const Eigen::Index K = G_.cols();
  if (a_hat.size() != K) throw DimensionError("B step: A_hat must have K entries");
  // T = c conj(G) diag(a) G^T = Qg M, so the column LS on T[:, S_j] has the same
  // minimiser (and the same singular values) as the K-row problem on M[:, S_j].
  const CMatrix M = c_ * (Rg_ * a_hat.asDiagonal() * G_.transpose());
  CMatrix B = CMatrix::Zero(N, N);
  const Eigen::Index r_max = support_.RMax();
  for (Eigen::Index j = 0; j < N; ++j) {
    const auto& rows = support_.Rows(static_cast<int>(j));
    const bool singular = r_max <= kSmallSupport
                              ? SolveColumn<SmallMatrix>(M, rows, j, B)
                              : SolveColumn<CMatrix>(M, rows, j, B);
    if (singular && deficient) deficient->push_back(static_cast<int>(j));
  }
  return B;
}

AStepSolution AlternatingSolver::AStep(const CMatrix& B_hat) const {
  const Eigen::Index K = G_.cols();
  // Sum_j W_j^H W_j and Sum_j W_j^H q_j in closed form, W_j = c conj(G) diag(v_j)
  // with v_j the j-th column of V = G^T B.
  const CMatrix V = GtB(B_hat);
  const CMatrix normal = (c_ * c_) * gram_.cwiseProduct(V.conjugate() * V.transpose());
  const CVector rhs = c_ * (V.conjugate().cwiseProduct(GtQ_)).rowwise().sum();

  RMatrix S(2 * K, 2 * K);
  S.topLeftCorner(K, K) = normal.real();
  S.topRightCorner(K, K) = -normal.imag();
  S.bottomLeftCorner(K, K) = normal.imag();
  S.bottomRightCorner(K, K) = normal.real();
  S = 0.5 * (S + S.transpose()).eval();  // Hermitian normal matrix
  RVector t(2 * K);
  t.head(K) = rhs.real();
  t.tail(K) = rhs.imag();

  Eigen::SelfAdjointEigenSolver<RMatrix> eig(S, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > 1e-13 * hi)) {
    std::ostringstream msg;
    msg << "A step: normal matrix singular (eigenvalues in [" << lo << ", " << hi
        << "])";
    throw SingularityError(msg.str());
  }
  AStepSolution sol;
  sol.condition = hi / lo;
  sol.psi = S.ldlt().solve(t);
  sol.xi = sol.psi.head(K).cast<cd>() + cd(0.0, 1.0) * sol.psi.tail(K).cast<cd>();
  return sol;
}

double AlternatingSolver::Objective(const CVector& a_hat, const CMatrix& B_hat) const {
  // ||Q - Qg M B||^2 = ||Q_perp||^2 + ||Qg^H Q - c Rg diag(a) G^T B||^2
  const CMatrix inside = c_ * (Rg_ * (a_hat.asDiagonal() * GtB(B_hat)));
  return perp_ + (QgQ_ - inside).squaredNorm();
}

CMatrix EstimateBStep(const CMatrix& Q, const CMatrix& G_hat, const CVector& a_hat,
                      const SparsitySupport& support, double rho_tilde_u,
                      double rho_tilde_d, BStepDiagnostics* diag) {
  const AlternatingSolver solver(Q, G_hat, support, rho_tilde_u, rho_tilde_d);
  std::vector<int> deficient;
  CMatrix B = solver.BStep(a_hat, &deficient);
  if (diag) diag->rank_deficient_columns = std::move(deficient);
  return B;
}

AStepSolution EstimateAStep(const CMatrix& Q, const CMatrix& G_hat,
                            const CMatrix& B_hat, double rho_tilde_u,
                            double rho_tilde_d) {
  const SparsitySupport full = SparsitySupport::Full(static_cast<int>(G_hat.rows()));
  return AlternatingSolver(Q, G_hat, full, rho_tilde_u, rho_tilde_d).AStep(B_hat);
}

double EstimationObjective(const CMatrix& Q, const CMatrix& G_hat,
                           const CVector& a_hat, const CMatrix& B_hat,
                           double rho_tilde_u, double rho_tilde_d) {
  CheckInputs(Q, G_hat, rho_tilde_u, rho_tilde_d);
  const double c = std::sqrt(rho_tilde_u * rho_tilde_d);
  const CMatrix model =
      c * (G_hat.conjugate() * (a_hat.asDiagonal() * (G_hat.transpose() * B_hat)));
  return (Q - model).squaredNorm();
}

EstimationResult IterateEstimate(const std::vector<CMatrix>& Q_list,
                                 const std::vector<CMatrix>& G_hat_list,
                                 const SparsitySupport& support,
                                 double rho_tilde_u, double rho_tilde_d,
                                 const EstimationOptions& options) {
  if (options.iters < 1) throw ParameterError("estimation needs iters >= 1");
  if (Q_list.empty() || Q_list.size() != G_hat_list.size()) {
    throw DimensionError("estimation needs matching, non-empty Q and G lists");
  }
  const Eigen::Index N = G_hat_list.front().rows();
  const Eigen::Index K = G_hat_list.front().cols();
  const std::size_t n_sc = Q_list.size();

  EstimationResult res;
  res.iterations = options.iters;
  CVector a_sum = CVector::Zero(K);
  CMatrix B_sum = CMatrix::Zero(N, N);
  std::vector<EstimationSnapshot> history;
  if (options.keep_history) {
    history.assign(options.iters, {CVector::Zero(K), CMatrix::Zero(N, N)});
  }
  std::set<int> deficient_all;

  for (std::size_t l = 0; l < n_sc; ++l) {
    RequireShape(G_hat_list[l], N, K, "estimation G_hat");
    const AlternatingSolver solver(Q_list[l], G_hat_list[l], support, rho_tilde_u,
                                   rho_tilde_d);
    CVector a = CVector::Ones(K);
    CMatrix B;
    std::vector<double> trace;
    trace.reserve(2 * options.iters);
    for (int m = 0; m < options.iters; ++m) {
      std::vector<int> deficient;
      B = solver.BStep(a, &deficient);
      deficient_all.insert(deficient.begin(), deficient.end());
      trace.push_back(solver.Objective(a, B));
      a = solver.AStep(B).xi;
      trace.push_back(solver.Objective(a, B));
      if (options.keep_history) {
        history[m].a_hat += a;
        history[m].B_hat += B;
      }
    }
    a_sum += a;
    B_sum += B;
    res.objective_trace.push_back(std::move(trace));
  }

  const double inv = 1.0 / static_cast<double>(n_sc);
  res.xi_hat = a_sum * inv;
  res.A_hat = CDiagonal(res.xi_hat);
  res.B_hat = B_sum * inv;
  res.psi_hat.resize(2 * K);
  res.psi_hat.head(K) = res.xi_hat.real();
  res.psi_hat.tail(K) = res.xi_hat.imag();
  res.rank_deficient_columns.assign(deficient_all.begin(), deficient_all.end());
  for (auto& h : history) {
    h.a_hat *= inv;
    h.B_hat *= inv;
  }
  res.history = std::move(history);
  return res;
}

}  // namespace nrc
