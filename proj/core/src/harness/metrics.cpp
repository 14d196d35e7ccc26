// SPDX-License-Identifier: Apache-2.0

#include "nrc/harness/metrics.hpp"

#include <cmath>
#include <limits>

namespace nrc {

double NormalizedMse(const CMatrix& truth, const CMatrix& estimate, Side side) {
  RequireShape(estimate, truth.rows(), truth.cols(), "normalized MSE");
  double num;
  double den;
  if (side == Side::kBs) {
    num = (truth - estimate).squaredNorm();
    den = truth.squaredNorm();
  } else {
    num = (truth.diagonal() - estimate.diagonal()).squaredNorm();
    den = truth.diagonal().squaredNorm();
  }
  if (!(den > 0.0)) throw ParameterError("normalized MSE: zero-norm reference");
  return num / den;
}

double SpectralEfficiency(int K, int overhead_symbols, int T, double mean_log_term) {
  if (overhead_symbols >= T) {
    throw ConfigError("spectral efficiency: pilot overhead fills the coherence block");
  }
  if (mean_log_term < 0.0) {
    throw ParameterError("spectral efficiency: negative mean log term");
  }
  return K * (1.0 - static_cast<double>(overhead_symbols) / T) * mean_log_term;
}

double SpectralEfficiency(const ScenarioConfig& config, double mean_log_term) {
  return SpectralEfficiency(config.K, config.OverheadSymbols(), config.T,
                            mean_log_term);
}

MeanCi MeanWithCi(const std::vector<double>& samples, double z) {
  MeanCi out;
  double sum = 0.0;
  for (double x : samples) {
    if (std::isnan(x)) continue;
    sum += x;
    ++out.count;
  }
  if (out.count == 0) {
    out.mean = out.halfwidth = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.mean = sum / out.count;
  if (out.count < 2) {
    out.halfwidth = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double ss = 0.0;
  for (double x : samples) {
    if (!std::isnan(x)) ss += (x - out.mean) * (x - out.mean);
  }
  const double sd = std::sqrt(ss / (out.count - 1));
  out.halfwidth = z * sd / std::sqrt(static_cast<double>(out.count));
  return out;
}

}  // namespace nrc
