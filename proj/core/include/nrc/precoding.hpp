// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nrc/random.hpp"
#include "nrc/types.hpp"

namespace nrc {

enum class PrecoderKind { kMrt, kZf };

std::string ToString(PrecoderKind kind);
PrecoderKind ParsePrecoderKind(const std::string& name);

// U already carries beta, i.e. the transmitted vector is U s.
struct Precoder {
  CMatrix U;
  double beta = 1.0;
  PrecoderKind kind = PrecoderKind::kMrt;
  bool nrc_corrected = false;
};

// Power normalisation. Without an ensemble power the scaling is per
// realisation, beta = 1/sqrt(Tr(W^H W)); with one, beta = 1/sqrt(power) where
// power is an average of Tr(W^H W) over the realisations of interest.
struct Normalization {
  std::optional<double> ensemble_power;

  double Beta(const CMatrix& W) const;
};

// Uplink pilots followed by the per-entry LMMSE estimate for CN(0,1) entries.
CMatrix UlTrainAndEstimate(const CMatrix& G, double rho_u, int tau_u, Rng& rng);

// Precoder before scaling: H^H for MRT, H^H (H H^H)^-1 for ZF.
CMatrix RawPrecoder(const CMatrix& H_hat, PrecoderKind kind);

Precoder MakePrecoder(const CMatrix& H_hat, PrecoderKind kind,
                      const Normalization& norm = {});

// Precompiled B_hat^-1 (and optional A_hat^-1) so that the same estimates can be
// applied to every coherence block cheaply.
class NrcCompensator {
 public:
  NrcCompensator(const CMatrix& B_hat, std::optional<CVector> a_hat = {});

  // Unnormalised B^-1 W A^-1.
  CMatrix Transform(const CMatrix& W) const;
  Precoder Apply(const Precoder& p, const Normalization& norm = {}) const;

 private:
  Eigen::PartialPivLU<CMatrix> lu_;
  std::optional<CVector> a_inv_;
};

Precoder NrcAware(const Precoder& p, const std::optional<CVector>& a_hat,
                  const CMatrix& B_hat, const Normalization& norm = {});

// Unit-modulus QPSK symbols, K x n.
CMatrix QpskSymbols(int K, int n, Rng& rng);

// One coherence block of downlink data. Columns are symbol times.
struct LinkBlock {
  CMatrix r;      // received symbols
  CMatrix s;      // transmitted symbols
  CMatrix z_si;   // self interference
  CMatrix z_iui;  // inter-user interference
  CMatrix z_d;    // receiver noise
  CVector alpha_hat;
  double rho_d = 0.0;
};

// H U, the K x K matrix of beamformed gains; entry (k, l) is beta h_k^T u_l.
CMatrix BeamformedGains(const CMatrix& H, const Precoder& p);

// r = sqrt(rho_d) H U s + z_d, split per the effective-gain decomposition
// against alpha_hat. Set noise=false to switch off z_d.
LinkBlock DlTransmitReceive(const CMatrix& H, const Precoder& p,
                            const CMatrix& s, double rho_d,
                            const CVector& alpha_hat, Rng& rng,
                            bool noise = true);

inline constexpr double kDefaultSinrCap = 1e9;

// SINR_k = rho |alpha_k|^2 / mean_t |r_kt - sqrt(rho) alpha_k s_kt|^2.
RVector InstantaneousSinr(const LinkBlock& link, const CVector& alpha_hat,
                          double rho_d, double cap = kDefaultSinrCap);

struct GainStatistics {
  CVector mean;
  RVector variance;  // per user, of the complex gain
  int samples = 0;
};

// Sample statistics of the diagonal beamformed gain beta h_k^T u_k. The
// sampler returns the K gains of sample i.
GainStatistics EffectiveGain(const std::function<CVector(int)>& sampler,
                             int n_mc);

}  // namespace nrc
