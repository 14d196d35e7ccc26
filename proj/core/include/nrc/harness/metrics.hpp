// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "nrc/harness/scenario.hpp"
#include "nrc/types.hpp"

namespace nrc {

enum class Side { kBs, kUe };

// BS: ||B - B_hat||_F^2 / ||B||_F^2. UE: the same over the diagonals only.
double NormalizedMse(const CMatrix& truth, const CMatrix& estimate, Side side);

// K (1 - overhead/T) mean_log_term.
double SpectralEfficiency(int K, int overhead_symbols, int T, double mean_log_term);
double SpectralEfficiency(const ScenarioConfig& config, double mean_log_term);

struct MeanCi {
  double mean = 0.0;
  double halfwidth = 0.0;  // 95 %, normal approximation
  int count = 0;
};

// NaN samples are skipped; all-NaN input gives NaN mean and halfwidth.
MeanCi MeanWithCi(const std::vector<double>& samples, double z = 1.959963984540054);

}  // namespace nrc
