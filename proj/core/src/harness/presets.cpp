// SPDX-License-Identifier: Apache-2.0

#include "nrc/harness/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nrc/harness/metrics.hpp"

namespace nrc {
namespace {

std::string FormatD(double d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", d);
  return buf;
}

std::vector<double> Range(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

std::vector<SeriesSpec> BothPrecoders(std::initializer_list<Scheme> schemes,
                                      std::optional<double> D = {}) {
  std::vector<SeriesSpec> out;
  for (PrecoderKind p : {PrecoderKind::kMrt, PrecoderKind::kZf}) {
    for (Scheme s : schemes) out.push_back({s, p, D});
  }
  return out;
}

}  // namespace

std::string SeriesSpec::Label() const {
  std::string label = ToString(scheme);
  if (D) label += "/D=" + FormatD(*D);
  return label;
}

const std::vector<std::string>& PresetNames() {
  static const std::vector<std::string> names = {"fig2", "fig5", "fig6",
                                                 "fig7", "fig8", "fig9"};
  return names;
}

SweepSpec Preset(const std::string& name) {
  SweepSpec s;
  s.name = name;
  ScenarioConfig& b = s.base;
  if (name == "fig2") {
    // Ideal vs blind vs perfectly compensated, SE against downlink SNR.
    s.param = "rho_d";
    s.values = Range(-10.0, 30.0, 5.0);
    s.series = BothPrecoders({Scheme::kReciprocalIdeal, Scheme::kNrcBlind,
                              Scheme::kNrcAwarePerfect});
  } else if (name == "fig5") {
    // MSE and SE of the proposed estimator against sigma_M^2 for each D.
    s.param = "sigma_M2_db";
    s.values = Range(-30.0, -10.0, 2.5);
    for (double D : {0.0, 1.0, std::sqrt(2.0)}) {
      s.series.push_back({Scheme::kNrcAwareProposed, PrecoderKind::kZf, D});
    }
  } else if (name == "fig6") {
    // Estimation MSE against the iteration count at high NRC levels.
    b.sigma_F2_db = b.sigma_L2_db = b.sigma_M2_db = -15.0;
    b.blocks_per_trial = 0;
    s.param = "iters";
    s.values = Range(1.0, 8.0, 1.0);
    for (double D : {0.0, 1.0}) {
      s.series.push_back({Scheme::kNrcAwareProposed, PrecoderKind::kZf, D});
    }
  } else if (name == "fig7") {
    s.param = "K";
    s.values = Range(10.0, 70.0, 10.0);
    s.series = BothPrecoders(
        {Scheme::kNrcAwareProposed, Scheme::kArgos, Scheme::kNeighborLs});
  } else if (name == "fig8") {
    s.param = "sigma_M2_db";
    s.values = Range(-30.0, -10.0, 2.5);
    s.series = BothPrecoders(
        {Scheme::kNrcAwareProposed, Scheme::kArgos, Scheme::kNeighborLs});
  } else if (name == "fig9") {
    s.param = "rho_d";
    s.values = Range(-10.0, 30.0, 5.0);
    s.series = BothPrecoders(
        {Scheme::kNrcAwareProposed, Scheme::kArgos, Scheme::kNeighborLs});
  } else {
    throw ConfigError("unknown preset '" + name +
                      "' (expected fig2, fig5, fig6, fig7, fig8 or fig9)");
  }
  return s;
}

std::vector<MetricsRecord> RunSweep(const SweepSpec& spec, const RunOptions& options) {
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  if (spec.series.empty()) throw ConfigError("sweep needs at least one series");
  const auto& params = SweepableParameters();
  if (std::find(params.begin(), params.end(), spec.param) == params.end()) {
    ScenarioConfig probe = spec.base;
    ApplyParameter(probe, spec.param, spec.values.front());  // throws
  }
  // Validate every point before spending any compute.
  for (double v : spec.values) {
    for (const SeriesSpec& series : spec.series) {
      ScenarioConfig c = spec.base;
      c.scheme = series.scheme;
      c.precoder = series.precoder;
      if (series.D) c.D = *series.D;
      ApplyParameter(c, spec.param, v);
      c.Validate();
    }
  }

  std::vector<MetricsRecord> rows;
  const bool shortcut = spec.param == "iters" && spec.base.blocks_per_trial == 0;
  if (shortcut) {
    const double top = *std::max_element(spec.values.begin(), spec.values.end());
    std::vector<std::vector<MetricsRecord>> per_series;
    for (const SeriesSpec& series : spec.series) {
      ScenarioConfig c = spec.base;
      c.scheme = series.scheme;
      c.precoder = series.precoder;
      if (series.D) c.D = *series.D;
      ApplyParameter(c, "iters", top);
      RunOptions opt = options;
      opt.keep_iteration_history = true;
      const ScenarioResult res = RunScenario(c, opt);
      std::vector<MetricsRecord> recs;
      for (double v : spec.values) {
        MetricsRecord r = res.Summary(spec.param, v);
        r.scheme = series.Label();
        if (!res.mse_B_by_iter.empty()) {
          const int m = static_cast<int>(v) - 1;
          r.mse_B = MeanWithCi(res.mse_B_by_iter[m]).mean;
          r.mse_A = MeanWithCi(res.mse_A_by_iter[m]).mean;
        }
        recs.push_back(r);
      }
      per_series.push_back(std::move(recs));
    }
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      for (const auto& recs : per_series) rows.push_back(recs[i]);
    }
    return rows;
  }

  for (double v : spec.values) {
    for (const SeriesSpec& series : spec.series) {
      ScenarioConfig c = spec.base;
      c.scheme = series.scheme;
      c.precoder = series.precoder;
      if (series.D) c.D = *series.D;
      ApplyParameter(c, spec.param, v);
      MetricsRecord r = RunScenario(c, options).Summary(spec.param, v);
      r.scheme = series.Label();
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace nrc
