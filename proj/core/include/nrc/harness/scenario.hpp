// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrc/channel_model.hpp"
#include "nrc/precoding.hpp"

namespace nrc {

enum class Scheme {
  kReciprocalIdeal,
  kNrcBlind,
  kNrcAwarePerfect,
  kNrcAwareProposed,
  kArgos,
  kNeighborLs,
};

std::string ToString(Scheme s);
Scheme ParseScheme(const std::string& name);
bool IsBaseline(Scheme s);

enum class BetaConvention { kPerRealization, kEnsemble };

std::string ToString(BetaConvention b);
BetaConvention ParseBetaConvention(const std::string& name);

struct ScenarioConfig {
  int N = 100;
  int K = 20;
  int tau_u = 20;
  // Downlink pilots of the baseline schemes; 0 means tau_d = K. Schemes that
  // decode on the statistical gain never spend downlink pilots.
  int tau_d = 0;
  int T = 250;
  double rho_u = 0.0;  // all SNRs in dB
  double rho_d = 20.0;
  double rho_tilde_u = 0.0;
  double rho_tilde_d = 10.0;
  double sigma_F2_db = -20.0;
  double sigma_L2_db = -20.0;
  double sigma_M2_db = -20.0;
  double D = 1.0;
  int C_sc = 10;
  int iters = 4;
  PrecoderKind precoder = PrecoderKind::kZf;
  Scheme scheme = Scheme::kNrcAwareProposed;
  int trials = 200;
  int blocks_per_trial = 10;  // 0 runs the NRC estimation only
  std::uint64_t seed = 1;

  int array_rows = 10;
  int array_cols = 10;
  double spacing = 0.5;
  double carrier_freq_hz = 3.5e9;
  double coupling_snr_db = 80.0;
  double neighbor_radius = 1.0;
  int alpha_mc = 2000;
  BetaConvention beta_convention = BetaConvention::kPerRealization;
  bool charge_nrc_overhead = false;
  double sinr_cap = 1e9;
  int data_subcarriers = 1;

  // Throws ConfigError on any violated invariant.
  void Validate() const;

  // Downlink pilot symbols charged in the spectral efficiency.
  int EffectiveTauD() const;
  // Symbols lost per coherence interval (tau_u + tau_d, plus 2N when the
  // NRC pilot phase is charged).
  int OverheadSymbols() const;
  double PrefactorFraction() const;  // 1 - overhead / T

  NrcVariances Variances() const;
  ArrayGeometry Geometry() const;
};

// JSON round trip with the field names above. Unknown keys are rejected.
ScenarioConfig ConfigFromJson(const std::string& text);
std::string ConfigToJson(const ScenarioConfig& config);

// Sets one sweepable parameter. Sweeping K keeps tau_u = K.
void ApplyParameter(ScenarioConfig& config, const std::string& name, double value);
const std::vector<std::string>& SweepableParameters();

}  // namespace nrc
