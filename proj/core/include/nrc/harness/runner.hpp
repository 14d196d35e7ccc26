// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrc/harness/scenario.hpp"
#include "nrc/precoding.hpp"

namespace nrc {

// Sub-stream tags. Every random draw of a run comes from
// Rng::Derive(seed, {tag, trial, ...}), so schemes that share a seed see the
// same NRC realisations, channels and noise.
enum StreamTag : std::uint64_t {
  kStreamNrc = 1,
  kStreamEstimation = 2,
  kStreamChannel = 3,
  kStreamData = 4,
  kStreamGainCalibration = 5,
  kStreamCoupling = 6,
};

struct MetricsRecord {
  std::string scheme;
  std::string precoder;
  std::string param_name;
  double param_value = 0.0;
  double spectral_efficiency = 0.0;
  double mse_B = 0.0;
  double mse_A = 0.0;
  double mean_log_term = 0.0;
  int trials = 0;
  double ci_halfwidth = 0.0;  // of spectral_efficiency
};

struct RunOptions {
  int workers = 1;
  // Keep the per-round MSE of the proposed estimator (rounds 1..iters).
  bool keep_iteration_history = false;
};

struct ScenarioResult {
  ScenarioConfig config;
  // Per trial; NaN where a quantity does not apply to the scheme.
  std::vector<double> mean_log_term;
  std::vector<double> spectral_efficiency;
  std::vector<double> mse_B;
  std::vector<double> mse_A;
  // [round][trial], filled with keep_iteration_history.
  std::vector<std::vector<double>> mse_B_by_iter;
  std::vector<std::vector<double>> mse_A_by_iter;
  // Statistical gain the UEs decode with (schemes without downlink pilots), or
  // the prior of the downlink-pilot estimate (baselines).
  GainStatistics alpha;
  int rank_deficient_trials = 0;

  MetricsRecord Summary(const std::string& param_name = "",
                        double param_value = 0.0) const;
};

ScenarioResult RunScenario(const ScenarioConfig& config,
                           const RunOptions& options = {});

}  // namespace nrc
