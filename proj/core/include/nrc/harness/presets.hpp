// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nrc/harness/runner.hpp"
#include "nrc/harness/scenario.hpp"

namespace nrc {

// One curve of a sweep. A D override is reflected in the label, e.g.
// "nrc-aware-proposed/D=1".
struct SeriesSpec {
  Scheme scheme = Scheme::kNrcAwareProposed;
  PrecoderKind precoder = PrecoderKind::kZf;
  std::optional<double> D;

  std::string Label() const;
};

struct SweepSpec {
  std::string name;
  ScenarioConfig base;
  std::string param;
  std::vector<double> values;
  std::vector<SeriesSpec> series;
};

const std::vector<std::string>& PresetNames();
SweepSpec Preset(const std::string& name);

// One record per (value, series), values outermost. An iteration sweep of an
// estimation-only run (blocks_per_trial = 0) is served from a single run at
// the largest iteration count, the per-round estimates being identical to
// shorter runs.
std::vector<MetricsRecord> RunSweep(const SweepSpec& spec,
                                    const RunOptions& options = {});

}  // namespace nrc
