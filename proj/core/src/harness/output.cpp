// SPDX-License-Identifier: Apache-2.0

#include "nrc/harness/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace nrc {

const std::vector<std::string>& CsvColumns() {
  static const std::vector<std::string> cols = {
      "scheme",        "precoder",      "param_name", "param_value",
      "spectral_efficiency", "mse_B",   "mse_A",      "mean_log_term",
      "trials",        "ci_halfwidth"};
  return cols;
}

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void WriteCsv(std::ostream& os, const std::vector<MetricsRecord>& rows) {
  const auto& cols = CsvColumns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : rows) {
    os << r.scheme << ',' << r.precoder << ',' << r.param_name << ','
       << FormatNumber(r.param_value) << ',' << FormatNumber(r.spectral_efficiency)
       << ',' << FormatNumber(r.mse_B) << ',' << FormatNumber(r.mse_A) << ','
       << FormatNumber(r.mean_log_term) << ',' << r.trials << ','
       << FormatNumber(r.ci_halfwidth) << '\n';
  }
}

void WriteJson(std::ostream& os, const std::vector<MetricsRecord>& rows) {
  // JSON has no NaN; missing metrics become null.
  auto num = [](double v) -> nlohmann::json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"scheme", r.scheme},
                   {"precoder", r.precoder},
                   {"param_name", r.param_name},
                   {"param_value", num(r.param_value)},
                   {"spectral_efficiency", num(r.spectral_efficiency)},
                   {"mse_B", num(r.mse_B)},
                   {"mse_A", num(r.mse_A)},
                   {"mean_log_term", num(r.mean_log_term)},
                   {"trials", r.trials},
                   {"ci_halfwidth", num(r.ci_halfwidth)}});
  }
  os << arr.dump(2) << '\n';
}

}  // namespace nrc
