// SPDX-License-Identifier: Apache-2.0

#include "nrc/harness/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace nrc {
namespace {

using nlohmann::json;

const std::vector<std::pair<Scheme, std::string>>& SchemeNames() {
  static const std::vector<std::pair<Scheme, std::string>> names = {
      {Scheme::kReciprocalIdeal, "reciprocal-ideal"},
      {Scheme::kNrcBlind, "nrc-blind"},
      {Scheme::kNrcAwarePerfect, "nrc-aware-perfect"},
      {Scheme::kNrcAwareProposed, "nrc-aware-proposed"},
      {Scheme::kArgos, "argos"},
      {Scheme::kNeighborLs, "neighbor-ls"},
  };
  return names;
}

int AsInt(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d) return static_cast<int>(d);
  }
  throw ConfigError("config key '" + key + "' must be an integer");
}

double AsDouble(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string ToString(Scheme s) {
  for (const auto& [k, name] : SchemeNames()) {
    if (k == s) return name;
  }
  return "unknown";
}

Scheme ParseScheme(const std::string& name) {
  for (const auto& [k, n] : SchemeNames()) {
    if (n == name) return k;
  }
  throw ConfigError("unknown scheme '" + name + "'");
}

bool IsBaseline(Scheme s) { return s == Scheme::kArgos || s == Scheme::kNeighborLs; }

std::string ToString(BetaConvention b) {
  return b == BetaConvention::kPerRealization ? "per-realization" : "ensemble";
}

BetaConvention ParseBetaConvention(const std::string& name) {
  if (name == "per-realization") return BetaConvention::kPerRealization;
  if (name == "ensemble") return BetaConvention::kEnsemble;
  throw ConfigError("unknown beta_convention '" + name + "'");
}

void ScenarioConfig::Validate() const {
  Require(K >= 1, "K must be >= 1");
  Require(N >= K, "N must be >= K");
  Require(array_rows >= 1 && array_cols >= 1, "array dimensions must be positive");
  Require(array_rows * array_cols == N, "array_rows * array_cols must equal N");
  Require(spacing > 0.0, "spacing must be positive");
  Require(tau_u >= K, "tau_u must be >= K");
  Require(tau_d >= 0, "tau_d must be >= 0");
  if (IsBaseline(scheme)) Require(EffectiveTauD() >= K, "baselines need tau_d >= K");
  Require(T >= tau_u + EffectiveTauD() + 1, "T must be >= tau_u + tau_d + 1");
  if (charge_nrc_overhead && scheme == Scheme::kNrcAwareProposed) {
    Require(T >= 2 * N + K, "charged NRC signalling needs T >= 2N + K");
    Require(T > OverheadSymbols(), "charged NRC signalling leaves no data symbols");
  }
  Require(D >= 0.0, "D must be >= 0");
  Require(C_sc >= 1, "C_sc must be >= 1");
  Require(iters >= 1, "iters must be >= 1");
  Require(trials >= 1, "trials must be >= 1");
  Require(blocks_per_trial >= 0, "blocks_per_trial must be >= 0");
  Require(alpha_mc >= 1, "alpha_mc must be >= 1");
  Require(data_subcarriers >= 1, "data_subcarriers must be >= 1");
  Require(neighbor_radius > 0.0, "neighbor_radius must be positive");
  Require(sinr_cap > 0.0, "sinr_cap must be positive");
  for (double v : {rho_u, rho_d, rho_tilde_u, rho_tilde_d, sigma_F2_db,
                   sigma_L2_db, sigma_M2_db, coupling_snr_db}) {
    Require(std::isfinite(v), "SNRs and variances must be finite dB values");
  }
}

int ScenarioConfig::EffectiveTauD() const {
  if (!IsBaseline(scheme)) return 0;
  return tau_d == 0 ? K : tau_d;
}

int ScenarioConfig::OverheadSymbols() const {
  int o = tau_u + EffectiveTauD();
  if (charge_nrc_overhead && scheme == Scheme::kNrcAwareProposed) o += 2 * N;
  return o;
}

double ScenarioConfig::PrefactorFraction() const {
  return 1.0 - static_cast<double>(OverheadSymbols()) / T;
}

NrcVariances ScenarioConfig::Variances() const {
  return {DbToLinear(sigma_F2_db), DbToLinear(sigma_L2_db), DbToLinear(sigma_M2_db)};
}

ArrayGeometry ScenarioConfig::Geometry() const {
  return ArrayGeometry::Rectangular(array_rows, array_cols, spacing, carrier_freq_hz);
}

ScenarioConfig ConfigFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ScenarioConfig c;
  bool rows_given = false;
  bool cols_given = false;
  for (const auto& [key, v] : doc.items()) {
    if (key == "N") c.N = AsInt(v, key);
    else if (key == "K") c.K = AsInt(v, key);
    else if (key == "tau_u") c.tau_u = AsInt(v, key);
    else if (key == "tau_d") c.tau_d = AsInt(v, key);
    else if (key == "T") c.T = AsInt(v, key);
    else if (key == "rho_u") c.rho_u = AsDouble(v, key);
    else if (key == "rho_d") c.rho_d = AsDouble(v, key);
    else if (key == "rho_tilde_u") c.rho_tilde_u = AsDouble(v, key);
    else if (key == "rho_tilde_d") c.rho_tilde_d = AsDouble(v, key);
    else if (key == "sigma_F2_db") c.sigma_F2_db = AsDouble(v, key);
    else if (key == "sigma_L2_db") c.sigma_L2_db = AsDouble(v, key);
    else if (key == "sigma_M2_db") c.sigma_M2_db = AsDouble(v, key);
    else if (key == "D") c.D = AsDouble(v, key);
    else if (key == "C_sc") c.C_sc = AsInt(v, key);
    else if (key == "iters") c.iters = AsInt(v, key);
    else if (key == "precoder") {
      if (!v.is_string()) throw ConfigError("precoder must be a string");
      c.precoder = ParsePrecoderKind(v.get<std::string>());
    } else if (key == "scheme") {
      if (!v.is_string()) throw ConfigError("scheme must be a string");
      c.scheme = ParseScheme(v.get<std::string>());
    } else if (key == "trials") c.trials = AsInt(v, key);
    else if (key == "blocks_per_trial") c.blocks_per_trial = AsInt(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw ConfigError("seed must be a non-negative integer");
      }
      if (!v.is_number_unsigned() && v.get<long long>() < 0) {
        throw ConfigError("seed must be a non-negative integer");
      }
      c.seed = v.get<std::uint64_t>();
    } else if (key == "array_rows") {
      c.array_rows = AsInt(v, key);
      rows_given = true;
    } else if (key == "array_cols") {
      c.array_cols = AsInt(v, key);
      cols_given = true;
    } else if (key == "spacing") c.spacing = AsDouble(v, key);
    else if (key == "carrier_freq_hz") c.carrier_freq_hz = AsDouble(v, key);
    else if (key == "coupling_snr_db") c.coupling_snr_db = AsDouble(v, key);
    else if (key == "neighbor_radius") c.neighbor_radius = AsDouble(v, key);
    else if (key == "alpha_mc") c.alpha_mc = AsInt(v, key);
    else if (key == "beta_convention") {
      if (!v.is_string()) throw ConfigError("beta_convention must be a string");
      c.beta_convention = ParseBetaConvention(v.get<std::string>());
    } else if (key == "charge_nrc_overhead") {
      if (!v.is_boolean()) throw ConfigError("charge_nrc_overhead must be a boolean");
      c.charge_nrc_overhead = v.get<bool>();
    } else if (key == "sinr_cap") c.sinr_cap = AsDouble(v, key);
    else if (key == "data_subcarriers") c.data_subcarriers = AsInt(v, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  // A bare N without an explicit grid is laid out as a single row.
  if (!rows_given && !cols_given && c.N != c.array_rows * c.array_cols) {
    const int side = static_cast<int>(std::lround(std::sqrt(c.N)));
    if (side * side == c.N) {
      c.array_rows = c.array_cols = side;
    } else {
      c.array_rows = 1;
      c.array_cols = c.N;
    }
  }
  c.Validate();
  return c;
}

std::string ConfigToJson(const ScenarioConfig& c) {
  json doc = {
      {"N", c.N},
      {"K", c.K},
      {"tau_u", c.tau_u},
      {"tau_d", c.tau_d},
      {"T", c.T},
      {"rho_u", c.rho_u},
      {"rho_d", c.rho_d},
      {"rho_tilde_u", c.rho_tilde_u},
      {"rho_tilde_d", c.rho_tilde_d},
      {"sigma_F2_db", c.sigma_F2_db},
      {"sigma_L2_db", c.sigma_L2_db},
      {"sigma_M2_db", c.sigma_M2_db},
      {"D", c.D},
      {"C_sc", c.C_sc},
      {"iters", c.iters},
      {"precoder", ToString(c.precoder)},
      {"scheme", ToString(c.scheme)},
      {"trials", c.trials},
      {"blocks_per_trial", c.blocks_per_trial},
      {"seed", c.seed},
      {"array_rows", c.array_rows},
      {"array_cols", c.array_cols},
      {"spacing", c.spacing},
      {"carrier_freq_hz", c.carrier_freq_hz},
      {"coupling_snr_db", c.coupling_snr_db},
      {"neighbor_radius", c.neighbor_radius},
      {"alpha_mc", c.alpha_mc},
      {"beta_convention", ToString(c.beta_convention)},
      {"charge_nrc_overhead", c.charge_nrc_overhead},
      {"sinr_cap", c.sinr_cap},
      {"data_subcarriers", c.data_subcarriers},
  };
  return doc.dump(2);
}

const std::vector<std::string>& SweepableParameters() {
  static const std::vector<std::string> names = {"rho_d", "sigma_M2_db", "K", "D",
                                                 "iters"};
  return names;
}

void ApplyParameter(ScenarioConfig& c, const std::string& name, double value) {
  auto integer = [&](const char* what) {
    if (std::floor(value) != value) {
      throw ConfigError(std::string(what) + " must be an integer");
    }
    return static_cast<int>(value);
  };
  if (name == "rho_d") {
    c.rho_d = value;
  } else if (name == "sigma_M2_db") {
    c.sigma_M2_db = value;
  } else if (name == "K") {
    c.K = integer("K");
    c.tau_u = c.K;
  } else if (name == "D") {
    c.D = value;
  } else if (name == "iters") {
    c.iters = integer("iters");
  } else {
    throw ConfigError("unknown sweep parameter '" + name +
                      "' (expected rho_d, sigma_M2_db, K, D or iters)");
  }
}

}  // namespace nrc
