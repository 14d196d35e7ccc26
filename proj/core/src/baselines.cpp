// SPDX-License-Identifier: Apache-2.0

#include "nrc/baselines.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nrc {
namespace {

constexpr double kDeadLink = 1e-12;

}  // namespace

CMatrix CouplingChannel(const CMatrix& Z, double coupling_snr_db) {
  if (Z.rows() != Z.cols()) throw DimensionError("coupling channel: Z not square");
  CMatrix C = Z.cwiseAbs().cast<cd>();
  C.diagonal().setZero();
  const double peak = C.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) {
    throw ParameterError("coupling channel: array has no mutual coupling");
  }
  const double amp = std::pow(10.0, coupling_snr_db / 20.0);
  return (amp / peak) * C;
}

std::vector<std::pair<int, int>> StarPairs(int n, int reference) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    if (i != reference) pairs.emplace_back(reference, i);
  }
  return pairs;
}

std::vector<std::pair<int, int>> NeighborPairs(const ArrayGeometry& geometry,
                                               double radius) {
  // radius in units of lambda/2, like the sparsity threshold
  const double limit = radius * 0.5 * (1.0 + 1e-9);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < geometry.size(); ++i) {
    for (int j = i + 1; j < geometry.size(); ++j) {
      if (geometry.Distance(i, j) <= limit) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

CouplingMeasurement MeasureCoupling(const NrcRealization& nrc, const CMatrix& C,
                                    const std::vector<std::pair<int, int>>& pairs,
                                    double coupling_snr_db, Rng& rng,
                                    bool noise) {
  RequireShape(C, nrc.N(), nrc.N(), "coupling channel");
  // S(j, i): antenna i transmits, antenna j receives.
  const CMatrix S = nrc.E_r() * C * nrc.E_t();
  CouplingMeasurement m;
  m.coupling_snr_db = coupling_snr_db;
  m.pairs.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    CouplingObservation o;
    o.i = i;
    o.j = j;
    o.forward = S(j, i) + (noise ? rng.ComplexNormal() : cd(0.0));
    o.reverse = S(i, j) + (noise ? rng.ComplexNormal() : cd(0.0));
    m.pairs.push_back(o);
  }
  return m;
}

CalibrationResult ArgosCalibrate(const CouplingMeasurement& m, int n,
                                 int reference) {
  CalibrationResult res;
  CVector b = CVector::Ones(n);
  std::vector<bool> seen(n, false);
  seen[reference] = true;
  for (const auto& o : m.pairs) {
    int other;
    cd f, r;
    if (o.i == reference) {
      other = o.j;
      f = o.forward;
      r = o.reverse;
    } else if (o.j == reference) {
      other = o.i;
      f = o.reverse;
      r = o.forward;
    } else {
      continue;
    }
    // x_ref f = x_other r with x = 1/b and b_ref = 1.
    if (std::abs(f) < kDeadLink) {
      res.excluded.push_back(other);
      seen[other] = true;
      continue;
    }
    b(other) = r / f;
    seen[other] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[i]) res.excluded.push_back(i);
  }
  res.B_hat = b.asDiagonal();
  return res;
}

CalibrationResult NeighborLsCalibrate(const CouplingMeasurement& m, int n) {
  if (n < 1) throw DimensionError("neighbour LS: empty array");
  // Connectivity from antenna 0 over the measured pairs.
  std::vector<std::vector<int>> adj(n);
  for (const auto& o : m.pairs) {
    adj[o.i].push_back(o.j);
    adj[o.j].push_back(o.i);
  }
  std::vector<bool> reached(n, false);
  std::vector<int> stack{0};
  reached[0] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (!reached[w]) {
        reached[w] = true;
        stack.push_back(w);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!reached[i]) {
      throw ConfigError("neighbour LS: antenna " + std::to_string(i) +
                        " is not connected to the reference");
    }
  }

  CalibrationResult res;
  if (n == 1) {
    res.B_hat = CMatrix::Identity(1, 1);
    return res;
  }
  // Unknowns x_1..x_{n-1}; rows x_i f - x_j r = 0 with x_0 moved to the rhs.
  const Eigen::Index rows = static_cast<Eigen::Index>(m.pairs.size());
  CMatrix Mx = CMatrix::Zero(rows, n - 1);
  CVector rhs = CVector::Zero(rows);
  for (Eigen::Index p = 0; p < rows; ++p) {
    const auto& o = m.pairs[p];
    if (o.i == 0) rhs(p) -= o.forward; else Mx(p, o.i - 1) += o.forward;
    if (o.j == 0) rhs(p) += o.reverse; else Mx(p, o.j - 1) -= o.reverse;
  }
  const CVector x_rest = Mx.colPivHouseholderQr().solve(rhs);
  CVector b(n);
  b(0) = 1.0;
  for (int i = 1; i < n; ++i) {
    if (std::abs(x_rest(i - 1)) < kDeadLink) {
      throw SingularityError("neighbour LS: zero calibration coefficient");
    }
    b(i) = 1.0 / x_rest(i - 1);
  }
  res.B_hat = b.asDiagonal();
  return res;
}

CVector DlPilotCsi(const CMatrix& H, const Precoder& p, int tau_d, double rho_d,
                   const CVector& prior_mean, const RVector& prior_variance,
                   Rng& rng, double noise_variance) {
  const Eigen::Index K = H.rows();
  if (tau_d < K) {
    throw PilotBudgetError("downlink pilots need tau_d >= K (tau_d=" +
                           std::to_string(tau_d) + ", K=" + std::to_string(K) +
                           ")");
  }
  if (prior_mean.size() != K || prior_variance.size() != K) {
    throw DimensionError("downlink CSI: prior size differs from K");
  }
  // Rows of the tau_d-point DFT, unit-modulus entries: Phi Phi^H = tau_d I.
  CMatrix Phi(K, tau_d);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (int t = 0; t < tau_d; ++t) {
      const double ph = -2.0 * std::numbers::pi *
                        static_cast<double>((k * t) % tau_d) / tau_d;
      Phi(k, t) = cd(std::cos(ph), std::sin(ph));
    }
  }
  const CMatrix gains = BeamformedGains(H, p);
  const double a = std::sqrt(rho_d);
  CMatrix Y = a * gains * Phi;
  if (noise_variance > 0.0) {
    Y += rng.ComplexNormalMatrix(K, tau_d, noise_variance);
  }
  CVector alpha(K);
  const double scale = std::sqrt(rho_d * tau_d);
  for (Eigen::Index k = 0; k < K; ++k) {
    // Matched filter: y = sqrt(rho tau) g_kk + n, n ~ CN(0, noise_variance).
    const cd y = Phi.row(k).dot(Y.row(k)) / std::sqrt(static_cast<double>(tau_d));
    if (noise_variance <= 0.0) {
      if (!(scale > 0.0)) throw ParameterError("downlink CSI: zero pilot power");
      alpha(k) = y / scale;
      continue;
    }
    const double v = prior_variance(k);
    const double w = v * scale / (scale * scale * v + noise_variance);
    alpha(k) = prior_mean(k) + w * (y - scale * prior_mean(k));
  }
  return alpha;
}

}  // namespace nrc
