// SPDX-License-Identifier: Apache-2.0
//
// nrcsim: run single scenarios or parameter sweeps and write CSV/JSON rows.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nrc/harness/output.hpp"
#include "nrc/harness/presets.hpp"
#include "nrc/harness/runner.hpp"
#include "nrc/harness/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  int workers = 1;
  std::optional<int> trials;
  std::optional<int> blocks;
};

void AddCommon(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output file (default: stdout)");
  app->add_option("--seed", c.seed, "Override the 64-bit seed");
  app->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--trials", c.trials, "Override the number of NRC realisations")
      ->check(CLI::PositiveNumber);
  app->add_option("--blocks", c.blocks, "Override coherence blocks per trial")
      ->check(CLI::NonNegativeNumber);
}

nrc::ScenarioConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nrc::ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return nrc::ConfigFromJson(ss.str());
}

void ApplyCommon(nrc::ScenarioConfig& c, const Common& common) {
  if (common.seed) c.seed = *common.seed;
  if (common.trials) c.trials = *common.trials;
  if (common.blocks) c.blocks_per_trial = *common.blocks;
}

std::vector<double> ParseValues(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw nrc::ConfigError("cannot parse sweep value '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw nrc::ConfigError("cannot parse sweep value '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw nrc::ConfigError("--values is empty");
  return values;
}

void Emit(const std::vector<nrc::MetricsRecord>& rows, const Common& common) {
  std::ostringstream buf;
  if (common.format == "json") {
    nrc::WriteJson(buf, rows);
  } else {
    nrc::WriteCsv(buf, rows);
  }
  if (common.out.empty()) {
    std::cout << buf.str();
    return;
  }
  std::ofstream f(common.out, std::ios::binary);
  if (!f) throw nrc::ConfigError("cannot open output file '" + common.out + "'");
  f << buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel non-reciprocity estimation and mitigation simulator"};
  app.require_subcommand(1);

  Common sim_common;
  std::string sim_config;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario from a JSON config");
  simulate->add_option("--config", sim_config, "Scenario JSON file")->required();
  AddCommon(simulate, sim_common);

  Common sweep_common;
  std::string preset;
  std::string param;
  std::string values_text;
  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter or run a preset");
  auto* preset_opt = sweep->add_option("--preset", preset,
                                       "fig2, fig5, fig6, fig7, fig8 or fig9");
  auto* param_opt = sweep->add_option("--param", param,
                                      "rho_d, sigma_M2_db, K, D or iters");
  auto* values_opt = sweep->add_option("--values", values_text,
                                       "Comma-separated parameter values");
  sweep->add_option("--config", sweep_config, "Base scenario JSON file");
  preset_opt->excludes(param_opt);
  param_opt->needs(values_opt);
  values_opt->needs(param_opt);
  AddCommon(sweep, sweep_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) {
      nrc::ScenarioConfig c = LoadConfig(sim_config);
      ApplyCommon(c, sim_common);
      c.Validate();
      nrc::RunOptions opt;
      opt.workers = sim_common.workers;
      nrc::MetricsRecord r =
          nrc::RunScenario(c, opt).Summary("", std::numeric_limits<double>::quiet_NaN());
      Emit({r}, sim_common);
      return 0;
    }

    nrc::SweepSpec spec;
    if (!preset.empty()) {
      spec = nrc::Preset(preset);
      if (!sweep_config.empty()) spec.base = LoadConfig(sweep_config);
      if (preset == "fig6" && !sweep_config.empty()) spec.base.blocks_per_trial = 0;
    } else if (!param.empty()) {
      spec.name = "custom";
      if (!sweep_config.empty()) spec.base = LoadConfig(sweep_config);
      spec.param = param;
      spec.values = ParseValues(values_text);
      spec.series = {{spec.base.scheme, spec.base.precoder, std::nullopt}};
    } else {
      throw nrc::ConfigError("sweep needs --preset or --param/--values");
    }
    ApplyCommon(spec.base, sweep_common);
    nrc::RunOptions opt;
    opt.workers = sweep_common.workers;
    Emit(nrc::RunSweep(spec, opt), sweep_common);
    return 0;
  } catch (const nrc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nrc::PilotBudgetError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nrc::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
