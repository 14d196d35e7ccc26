// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "nrc/channel_model.hpp"
#include "nrc/random.hpp"
#include "nrc/types.hpp"

namespace nrc {

// Unitary N-point DFT matrix.
CMatrix GenPilotMatrix(int N);

struct RoundTrip {
  CMatrix R;        // K x N, downlink pilot reception at the UEs
  CMatrix Y;        // N x N, echoed conjugates received at the BS
  CMatrix Z_total;  // N x N, sqrt(rho_u) G conj(Z_d) + Z_u
};

// Two-way over-the-air exchange; noise=false switches both noise terms off.
RoundTrip Roundtrip(const CMatrix& G, const CMatrix& H, const CMatrix& X,
                    double rho_tilde_d, double rho_tilde_u, Rng& rng,
                    bool noise = true);

struct ProcessedObservation {
  CMatrix Q;
  double rho_tilde_u = 1.0;
  double rho_tilde_d = 1.0;
  int subcarrier_index = 0;
};

// Q = conj(Y) X^H.
ProcessedObservation ProcessObservation(const CMatrix& Y, const CMatrix& X,
                                        double rho_tilde_u, double rho_tilde_d,
                                        int subcarrier_index = 0);

struct BStepDiagnostics {
  std::vector<int> rank_deficient_columns;
};

// Column-wise support-restricted LS for B given A_hat (a diagonal, K entries).
CMatrix EstimateBStep(const CMatrix& Q, const CMatrix& G_hat, const CVector& a_hat,
                      const SparsitySupport& support, double rho_tilde_u,
                      double rho_tilde_d, BStepDiagnostics* diag = nullptr);

struct AStepSolution {
  CVector xi;   // diagonal of A_hat
  RVector psi;  // [Re xi; Im xi]
  double condition = 0.0;
};

// Closed-form LS for diagonal A given B_hat via the real-stacked system.
AStepSolution EstimateAStep(const CMatrix& Q, const CMatrix& G_hat,
                            const CMatrix& B_hat, double rho_tilde_u,
                            double rho_tilde_d);

// || Q - c conj(G) diag(a) G^T B ||_F^2 with c = sqrt(rho_u rho_d).
double EstimationObjective(const CMatrix& Q, const CMatrix& G_hat,
                           const CVector& a_hat, const CMatrix& B_hat,
                           double rho_tilde_u, double rho_tilde_d);

// Per-subcarrier workspace for the alternating steps. Everything that depends
// only on (Q, G_hat) is factored once: the thin QR conj(G_hat) = Qg Rg, the
// projections Qg^H Q and G_hat^T Q and the part of Q outside span(conj(G_hat)).
// Products with B only touch its support. G_hat and support are held by
// reference and must outlive the solver.
class AlternatingSolver {
 public:
  AlternatingSolver(const CMatrix& Q, const CMatrix& G_hat,
                    const SparsitySupport& support, double rho_tilde_u,
                    double rho_tilde_d);

  CMatrix BStep(const CVector& a_hat, std::vector<int>* deficient = nullptr) const;
  // B_hat must vanish outside the support.
  AStepSolution AStep(const CMatrix& B_hat) const;
  double Objective(const CVector& a_hat, const CMatrix& B_hat) const;

  int N() const { return static_cast<int>(G_.rows()); }
  int K() const { return static_cast<int>(G_.cols()); }

 private:
  static constexpr int kSmallSupport = 16;
  using SmallMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, 0,
                                    kSmallSupport, kSmallSupport>;

  CMatrix GtB(const CMatrix& B_hat) const;  // G_hat^T B on the support
  template <typename Small>
  bool SolveColumn(const CMatrix& M, const std::vector<int>& rows, Eigen::Index j,
                   CMatrix& B) const;

  const CMatrix& G_;
  const SparsitySupport& support_;
  double c_;
  CMatrix Qg_;
  CMatrix Rg_;
  CMatrix QgQ_;   // Qg^H Q
  CMatrix GtQ_;   // G^T Q
  CMatrix gram_;  // G^T conj(G)
  double perp_ = 0.0;
};

struct EstimationSnapshot {
  CVector a_hat;
  CMatrix B_hat;
};

struct EstimationResult {
  CDiagonal A_hat;
  CMatrix B_hat;
  CVector xi_hat;
  RVector psi_hat;
  // One trace per subcarrier: objective after each B step and each A step.
  std::vector<std::vector<double>> objective_trace;
  int iterations = 0;
  std::vector<int> rank_deficient_columns;  // union over subcarriers and rounds
  // Subcarrier-averaged estimates after each round, when requested.
  std::vector<EstimationSnapshot> history;
};

struct EstimationOptions {
  int iters = 4;
  bool keep_history = false;
};

// Alternating B/A refinement per subcarrier from A_hat = I, then averaging.
EstimationResult IterateEstimate(const std::vector<CMatrix>& Q_list,
                                 const std::vector<CMatrix>& G_hat_list,
                                 const SparsitySupport& support,
                                 double rho_tilde_u, double rho_tilde_d,
                                 const EstimationOptions& options = {});

}  // namespace nrc
