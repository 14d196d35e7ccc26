// SPDX-License-Identifier: Apache-2.0

#include "nrc/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nrc/special_functions.hpp"

namespace nrc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEta4Pi = 30.0;  // free-space eta / (4 pi)
constexpr double kDipoleLength = 0.5;
constexpr double kMinDiagonal = 1e-6;
constexpr int kMaxRedraws = 64;

}  // namespace

ArrayGeometry ArrayGeometry::Rectangular(int rows, int cols, double spacing,
                                         double carrier_freq_hz) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("ArrayGeometry: rows and cols must be positive");
  }
  if (!(spacing > 0.0)) {
    throw ParameterError("ArrayGeometry: spacing must be positive");
  }
  ArrayGeometry g;
  g.rows = rows;
  g.cols = cols;
  g.spacing = spacing;
  g.carrier_freq_hz = carrier_freq_hz;
  g.positions.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      g.positions.push_back({c * spacing, r * spacing});
    }
  }
  return g;
}

ArrayGeometry ArrayGeometry::Linear(int n, double spacing) {
  return Rectangular(1, n, spacing);
}

double ArrayGeometry::Distance(int i, int j) const {
  const auto& a = positions.at(i);
  const auto& b = positions.at(j);
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

SparsitySupport::SparsitySupport(double threshold,
                                 std::vector<std::vector<int>> support)
    : threshold_(threshold), support_(std::move(support)) {
  for (const auto& s : support_) {
    r_max_ = std::max(r_max_, static_cast<int>(s.size()));
  }
}

SparsitySupport SparsitySupport::FromGeometry(const ArrayGeometry& geometry,
                                              double D) {
  if (D < 0.0) throw ParameterError("SparsitySupport: negative threshold");
  const int n = geometry.size();
  // Grid distances like sqrt(2) need a little slack against rounding.
  const double limit = D * 0.5 * (1.0 + 1e-9);
  std::vector<std::vector<int>> support(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j || geometry.Distance(i, j) <= limit) support[j].push_back(i);
    }
  }
  return SparsitySupport(D, std::move(support));
}

SparsitySupport SparsitySupport::Diagonal(int n) {
  std::vector<std::vector<int>> support(n);
  for (int j = 0; j < n; ++j) support[j] = {j};
  return SparsitySupport(0.0, std::move(support));
}

SparsitySupport SparsitySupport::Full(int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return SparsitySupport(std::numeric_limits<double>::infinity(),
                         std::vector<std::vector<int>>(n, all));
}

std::vector<int> SparsitySupport::Neighbors(int j) const {
  std::vector<int> out;
  for (int i : support_[j]) {
    if (i != j) out.push_back(i);
  }
  return out;
}

bool SparsitySupport::Contains(int i, int j) const {
  const auto& s = support_[j];
  return std::binary_search(s.begin(), s.end(), i);
}

cd SelfImpedance() {
  const auto sc = SineCosine(kTwoPi);
  return {kEta4Pi * (kEulerGamma + std::log(kTwoPi) - sc.ci), kEta4Pi * sc.si};
}

cd MutualImpedance(double d) {
  if (!(d > 0.0)) {
    throw ParameterError("MutualImpedance: distance must be positive");
  }
  const double k = kTwoPi;
  const double root = std::sqrt(d * d + kDipoleLength * kDipoleLength);
  const auto s0 = SineCosine(k * d);
  const auto s1 = SineCosine(k * (root + kDipoleLength));
  const auto s2 = SineCosine(k * (root - kDipoleLength));
  const double r = kEta4Pi * (2.0 * s0.ci - s1.ci - s2.ci);
  const double x = -kEta4Pi * (2.0 * s0.si - s1.si - s2.si);
  return {r, x};
}

CMatrix ArrayImpedance(const ArrayGeometry& geometry) {
  const int n = geometry.size();
  CMatrix Z(n, n);
  const cd zs = SelfImpedance();
  for (int i = 0; i < n; ++i) {
    Z(i, i) = zs;
    for (int j = i + 1; j < n; ++j) {
      Z(i, j) = Z(j, i) = MutualImpedance(geometry.Distance(i, j));
    }
  }
  return Z;
}

CMatrix GenPhysicalChannel(int N, int K, Rng& rng) {
  if (K < 1 || N < K) {
    throw DimensionError("GenPhysicalChannel: need N >= K >= 1, got N=" +
                         std::to_string(N) + ", K=" + std::to_string(K));
  }
  return rng.ComplexNormalMatrix(N, K);
}

CDiagonal GenFrMismatch(int size, double sigma2, Rng& rng) {
  if (sigma2 < 0.0) throw ParameterError("GenFrMismatch: negative variance");
  if (size < 0) throw DimensionError("GenFrMismatch: negative size");
  CVector d(size);
  for (int i = 0; i < size; ++i) {
    cd v;
    int tries = 0;
    do {
      if (++tries > kMaxRedraws) {
        throw SingularityError("GenFrMismatch: could not draw invertible entry");
      }
      v = 1.0 + rng.ComplexNormal(sigma2);
    } while (std::abs(v) < kMinDiagonal);
    d(i) = v;
  }
  return CDiagonal(d);
}

CouplingDraw GenCouplingMatrix(const CMatrix& Z, double sigma_M2, Rng& rng,
                               double z_ref) {
  if (sigma_M2 < 0.0) {
    throw ParameterError("GenCouplingMatrix: negative variance");
  }
  if (Z.rows() != Z.cols() || Z.rows() == 0) {
    throw DimensionError("GenCouplingMatrix: impedance matrix must be square");
  }
  const Eigen::Index n = Z.rows();
  const cd scale = Z(0, 0) + z_ref;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    CouplingDraw out;
    out.reflections.resize(n);
    CMatrix loaded = Z;
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cd g = rng.ComplexNormal(sigma_M2);
      out.reflections(i) = g;
      if (std::abs(1.0 - g) < 1e-9) ok = false;  // open circuit
      loaded(i, i) += z_ref * (1.0 + g) / (1.0 - g);
    }
    if (!ok) continue;
    Eigen::PartialPivLU<CMatrix> lu(loaded);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-12)) continue;
    out.M = scale * lu.inverse();
    return out;
  }
  throw SingularityError("GenCouplingMatrix: loaded impedance matrix singular");
}

CouplingDraw GenCouplingMatrix(const ArrayGeometry& geometry, double sigma_M2,
                               Rng& rng) {
  return GenCouplingMatrix(ArrayImpedance(geometry), sigma_M2, rng);
}

CMatrix NrcRealization::A_dev() const {
  CMatrix a = A.toDenseMatrix();
  a.diagonal().array() -= 1.0;
  return a;
}

CMatrix NrcRealization::B_dev() const {
  CMatrix b = B;
  b.diagonal().array() -= 1.0;
  return b;
}

NrcRealization NrcRealization::Identity(int N, int K) {
  CDiagonal ik(CVector::Ones(K));
  CDiagonal in(CVector::Ones(N));
  return MakeNrc(ik, ik, in, in, CMatrix::Identity(N, N),
                 CMatrix::Identity(N, N));
}

NrcRealization MakeNrc(CDiagonal F_t, CDiagonal F_r, CDiagonal L_t,
                       CDiagonal L_r, CMatrix M_t, CMatrix M_r) {
  const Eigen::Index K = F_t.rows();
  const Eigen::Index N = L_t.rows();
  if (F_r.rows() != K || L_r.rows() != N) {
    throw DimensionError("MakeNrc: frequency-response sizes disagree");
  }
  RequireShape(M_t, N, N, "MakeNrc M_t");
  RequireShape(M_r, N, N, "MakeNrc M_r");

  NrcRealization nrc;
  nrc.A = CDiagonal(F_r.diagonal().cwiseQuotient(F_t.diagonal()));
  Eigen::PartialPivLU<CMatrix> lu(M_r.transpose());
  if (!(lu.rcond() > 1e-14)) {
    throw SingularityError("MakeNrc: RX coupling matrix singular");
  }
  CMatrix b = lu.solve(M_t * L_t);
  nrc.B = L_r.inverse() * b;

  nrc.F_t = std::move(F_t);
  nrc.F_r = std::move(F_r);
  nrc.L_t = std::move(L_t);
  nrc.L_r = std::move(L_r);
  nrc.M_t = std::move(M_t);
  nrc.M_r = std::move(M_r);
  nrc.gamma_t = CVector::Zero(N);
  nrc.gamma_r = CVector::Zero(N);
  return nrc;
}

NrcRealization DrawNrc(const CMatrix& Z, int K, const NrcVariances& var,
                       Rng& rng) {
  const int N = static_cast<int>(Z.rows());
  if (K < 1 || N < 1) throw DimensionError("DrawNrc: empty dimensions");
  // Fixed draw order: UE, BS frequency responses, then TX and RX coupling.
  CDiagonal F_t = GenFrMismatch(K, var.sigma_F2, rng);
  CDiagonal F_r = GenFrMismatch(K, var.sigma_F2, rng);
  CDiagonal L_t = GenFrMismatch(N, var.sigma_L2, rng);
  CDiagonal L_r = GenFrMismatch(N, var.sigma_L2, rng);
  CouplingDraw ct = GenCouplingMatrix(Z, var.sigma_M2, rng);
  CouplingDraw cr = GenCouplingMatrix(Z, var.sigma_M2, rng);
  NrcRealization nrc =
      MakeNrc(std::move(F_t), std::move(F_r), std::move(L_t), std::move(L_r),
              std::move(ct.M), std::move(cr.M));
  nrc.gamma_t = std::move(ct.reflections);
  nrc.gamma_r = std::move(cr.reflections);
  nrc.sigma_F2 = var.sigma_F2;
  nrc.sigma_L2 = var.sigma_L2;
  nrc.sigma_M2 = var.sigma_M2;
  return nrc;
}

ChannelSet AssembleChannels(const CMatrix& P, const NrcRealization& nrc,
                            int subcarrier_index) {
  RequireShape(P, nrc.N(), nrc.K(), "AssembleChannels P");
  ChannelSet cs;
  cs.P = P;
  cs.G = nrc.L_r * (nrc.M_r * P) * nrc.F_t;
  cs.H = nrc.F_r * (P.transpose() * nrc.M_t) * nrc.L_t;
  cs.subcarrier_index = subcarrier_index;
  return cs;
}

}  // namespace nrc
