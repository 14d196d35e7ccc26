// SPDX-License-Identifier: Apache-2.0

#include "nrc/precoding.hpp"

#include <algorithm>
#include <cmath>

namespace nrc {

std::string ToString(PrecoderKind kind) {
  return kind == PrecoderKind::kMrt ? "MRT" : "ZF";
}

PrecoderKind ParsePrecoderKind(const std::string& name) {
  if (name == "MRT" || name == "mrt") return PrecoderKind::kMrt;
  if (name == "ZF" || name == "zf") return PrecoderKind::kZf;
  throw ConfigError("unknown precoder '" + name + "' (expected MRT or ZF)");
}

double Normalization::Beta(const CMatrix& W) const {
  const double power = ensemble_power ? *ensemble_power : W.squaredNorm();
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw SingularityError("precoder has zero or non-finite power");
  }
  return 1.0 / std::sqrt(power);
}

CMatrix UlTrainAndEstimate(const CMatrix& G, double rho_u, int tau_u,
                           Rng& rng) {
  const int K = static_cast<int>(G.cols());
  if (tau_u < K) {
    throw PilotBudgetError("uplink training needs tau_u >= K (tau_u=" +
                           std::to_string(tau_u) + ", K=" + std::to_string(K) +
                           ")");
  }
  if (!(rho_u > 0.0)) throw ParameterError("uplink SNR must be positive");
  const double snr = rho_u * tau_u;
  const double a = std::sqrt(snr);
  CMatrix Y = a * G + rng.ComplexNormalMatrix(G.rows(), G.cols());
  return (a / (1.0 + snr)) * Y;
}

CMatrix RawPrecoder(const CMatrix& H_hat, PrecoderKind kind) {
  CMatrix Hh = H_hat.adjoint();
  if (kind == PrecoderKind::kMrt) return Hh;
  const CMatrix gram = H_hat * Hh;
  Eigen::LDLT<CMatrix> ldlt(gram);
  const auto d = ldlt.vectorD().real();
  if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 1e-12 * d.maxCoeff())) {
    throw SingularityError("ZF: H H^H is singular");
  }
  // H^H (H H^H)^-1 = ((H H^H)^-1 H)^H since the Gram matrix is Hermitian.
  return ldlt.solve(H_hat).adjoint();
}

Precoder MakePrecoder(const CMatrix& H_hat, PrecoderKind kind,
                      const Normalization& norm) {
  Precoder p;
  p.kind = kind;
  CMatrix W = RawPrecoder(H_hat, kind);
  p.beta = norm.Beta(W);
  p.U = p.beta * W;
  return p;
}

NrcCompensator::NrcCompensator(const CMatrix& B_hat, std::optional<CVector> a_hat)
    : lu_(B_hat) {
  if (B_hat.rows() != B_hat.cols()) {
    throw DimensionError("NRC-aware precoding: B_hat must be square");
  }
  if (!(lu_.rcond() > 1e-13)) {
    throw SingularityError("NRC-aware precoding: B_hat is singular");
  }
  if (a_hat) {
    if (a_hat->size() == 0 || !(a_hat->cwiseAbs().minCoeff() > 0.0)) {
      throw SingularityError("NRC-aware precoding: A_hat is singular");
    }
    a_inv_ = a_hat->cwiseInverse();
  }
}

CMatrix NrcCompensator::Transform(const CMatrix& W) const {
  if (W.rows() != lu_.rows()) {
    throw DimensionError("NRC-aware precoding: precoder/B_hat size mismatch");
  }
  CMatrix out = lu_.solve(W);
  if (a_inv_) {
    if (a_inv_->size() != W.cols()) {
      throw DimensionError("NRC-aware precoding: A_hat size mismatch");
    }
    out = out * a_inv_->asDiagonal();
  }
  return out;
}

Precoder NrcCompensator::Apply(const Precoder& p, const Normalization& norm) const {
  Precoder out;
  out.kind = p.kind;
  out.nrc_corrected = true;
  CMatrix W = Transform(p.U);
  // p.U carries the old beta; under an ensemble power that power refers to the
  // unscaled product so divide it back out first.
  if (norm.ensemble_power) W /= p.beta;
  out.beta = norm.Beta(W);
  out.U = out.beta * W;
  return out;
}

Precoder NrcAware(const Precoder& p, const std::optional<CVector>& a_hat,
                  const CMatrix& B_hat, const Normalization& norm) {
  return NrcCompensator(B_hat, a_hat).Apply(p, norm);
}

CMatrix QpskSymbols(int K, int n, Rng& rng) {
  const double h = 1.0 / std::sqrt(2.0);
  CMatrix s(K, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < K; ++k) {
      const std::uint64_t bits = rng.engine()() >> 62;
      s(k, j) = cd((bits & 1u) ? -h : h, (bits & 2u) ? -h : h);
    }
  }
  return s;
}

CMatrix BeamformedGains(const CMatrix& H, const Precoder& p) {
  if (H.cols() != p.U.rows() || H.rows() != p.U.cols()) {
    throw DimensionError("beamformed gains: H and U do not compose");
  }
  return H * p.U;
}

LinkBlock DlTransmitReceive(const CMatrix& H, const Precoder& p,
                            const CMatrix& s, double rho_d,
                            const CVector& alpha_hat, Rng& rng, bool noise) {
  const Eigen::Index K = H.rows();
  RequireShape(s, K, s.cols(), "downlink symbols");
  if (alpha_hat.size() != K) {
    throw DimensionError("downlink: alpha_hat must have K entries");
  }
  if (rho_d < 0.0) throw ParameterError("downlink SNR must be non-negative");
  const double a = std::sqrt(rho_d);
  const CMatrix gains = BeamformedGains(H, p);

  LinkBlock link;
  link.rho_d = rho_d;
  link.s = s;
  link.alpha_hat = alpha_hat;
  const CVector self = gains.diagonal();
  CMatrix cross = gains;
  cross.diagonal().setZero();
  link.z_si = a * (self - alpha_hat).asDiagonal() * s;
  link.z_iui = a * (cross * s);
  link.z_d = noise ? rng.ComplexNormalMatrix(K, s.cols())
                   : CMatrix::Zero(K, s.cols());
  link.r = a * (gains * s) + link.z_d;
  return link;
}

RVector InstantaneousSinr(const LinkBlock& link, const CVector& alpha_hat,
                          double rho_d, double cap) {
  const Eigen::Index K = link.r.rows();
  const Eigen::Index n = link.r.cols();
  if (alpha_hat.size() != K || n == 0) {
    throw DimensionError("SINR: alpha_hat/block size mismatch");
  }
  const double a = std::sqrt(rho_d);
  RVector sinr(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double signal = rho_d * std::norm(alpha_hat(k));
    const double residual =
        (link.r.row(k) - a * alpha_hat(k) * link.s.row(k)).squaredNorm() /
        static_cast<double>(n);
    const double v = residual > 0.0 ? signal / residual : cap;
    sinr(k) = std::min(v, cap);
  }
  return sinr;
}

GainStatistics EffectiveGain(const std::function<CVector(int)>& sampler,
                             int n_mc) {
  if (n_mc < 1) throw ParameterError("effective gain needs n_mc >= 1");
  GainStatistics st;
  CVector sum;
  RVector sum_sq;
  for (int i = 0; i < n_mc; ++i) {
    const CVector g = sampler(i);
    if (i == 0) {
      sum = CVector::Zero(g.size());
      sum_sq = RVector::Zero(g.size());
    }
    sum += g;
    sum_sq += g.cwiseAbs2();
  }
  st.samples = n_mc;
  st.mean = sum / static_cast<double>(n_mc);
  st.variance = (sum_sq / static_cast<double>(n_mc) - st.mean.cwiseAbs2())
                    .cwiseMax(0.0);
  if (n_mc > 1) st.variance *= static_cast<double>(n_mc) / (n_mc - 1);
  return st;
}

}  // namespace nrc
