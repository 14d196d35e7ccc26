// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nrc/harness/runner.hpp"

namespace nrc {

// Fixed column order:
// scheme,precoder,param_name,param_value,spectral_efficiency,mse_B,mse_A,
// mean_log_term,trials,ci_halfwidth
const std::vector<std::string>& CsvColumns();

void WriteCsv(std::ostream& os, const std::vector<MetricsRecord>& rows);
void WriteJson(std::ostream& os, const std::vector<MetricsRecord>& rows);

std::string FormatNumber(double v);

}  // namespace nrc
