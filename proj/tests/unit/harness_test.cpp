// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "nrc/harness/metrics.hpp"
#include "nrc/harness/output.hpp"
#include "nrc/harness/presets.hpp"
#include "nrc/harness/runner.hpp"
#include "nrc/harness/scenario.hpp"

namespace nrc {
namespace {

// 4x4 array, 6 users: small enough for a unit test, large enough to exercise
// every stage of a trial. K exceeds the D = 1 support size, so each column of
// the B step is overdetermined.
ScenarioConfig SmallConfig(Scheme scheme) {
  ScenarioConfig c;
  c.N = 16;
  c.array_rows = c.array_cols = 4;
  c.K = 6;
  c.tau_u = 6;
  c.T = 100;
  c.C_sc = 3;
  c.trials = 4;
  c.blocks_per_trial = 2;
  c.alpha_mc = 200;
  c.scheme = scheme;
  c.seed = 77;
  return c;
}

std::string Csv(const std::vector<MetricsRecord>& rows) {
  std::ostringstream os;
  WriteCsv(os, rows);
  return os.str();
}

TEST(NormalizedMse, Examples) {
  const CMatrix I = CMatrix::Identity(2, 2);
  EXPECT_EQ(NormalizedMse(I, I, Side::kBs), 0.0);
  EXPECT_EQ(NormalizedMse(I, CMatrix::Zero(2, 2), Side::kBs), 1.0);
  CMatrix est = I;
  est(0, 0) += 0.1;
  EXPECT_NEAR(NormalizedMse(I, est, Side::kBs), 0.005, 1e-15);
  EXPECT_THROW(NormalizedMse(CMatrix::Zero(2, 2), I, Side::kBs), ParameterError);
}

TEST(NormalizedMse, UeSideIgnoresOffDiagonal) {
  CMatrix A = CMatrix::Identity(3, 3);
  CMatrix est = A;
  est(0, 2) = 5.0;
  EXPECT_EQ(NormalizedMse(A, est, Side::kUe), 0.0);
  est(1, 1) = 0.0;
  EXPECT_NEAR(NormalizedMse(A, est, Side::kUe), 1.0 / 3.0, 1e-15);
}

TEST(SpectralEfficiencyFormula, Examples) {
  EXPECT_NEAR(SpectralEfficiency(20, 20, 250, 4.0), 73.6, 1e-12);
  EXPECT_NEAR(SpectralEfficiency(20, 40, 250, 4.0), 67.2, 1e-12);
  EXPECT_EQ(SpectralEfficiency(20, 20, 250, 0.0), 0.0);
  EXPECT_THROW(SpectralEfficiency(20, 250, 250, 1.0), ConfigError);
  EXPECT_THROW(SpectralEfficiency(20, 20, 250, -1.0), ParameterError);
}

TEST(SpectralEfficiencyFormula, BaselinesPayForDownlinkPilots) {
  ScenarioConfig proposed;
  ScenarioConfig argos = proposed;
  argos.scheme = Scheme::kArgos;
  EXPECT_EQ(proposed.OverheadSymbols(), 20);
  EXPECT_EQ(argos.OverheadSymbols(), 40);
  EXPECT_NEAR(SpectralEfficiency(proposed, 4.0), 73.6, 1e-12);
  EXPECT_NEAR(SpectralEfficiency(argos, 4.0), 67.2, 1e-12);
  for (double m : {0.1, 1.0, 7.5}) {
    EXPECT_LT(SpectralEfficiency(argos, m), SpectralEfficiency(proposed, m));
  }
}

TEST(SpectralEfficiencyFormula, ChargedNrcOverhead) {
  ScenarioConfig c;
  c.charge_nrc_overhead = true;
  c.T = 500;
  EXPECT_EQ(c.OverheadSymbols(), 220);
  EXPECT_NO_THROW(c.Validate());
  c.T = 219;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(MeanWithCi, NormalApproximation) {
  const MeanCi m = MeanWithCi({1.0, 2.0, 3.0, std::nan("")});
  EXPECT_EQ(m.count, 3);
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_NEAR(m.halfwidth, 1.959963984540054 * 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_TRUE(std::isnan(MeanWithCi({std::nan("")}).mean));
}

TEST(Config, JsonRoundTrip) {
  ScenarioConfig c = SmallConfig(Scheme::kNeighborLs);
  c.precoder = PrecoderKind::kMrt;
  c.D = std::sqrt(2.0);
  c.seed = 0xfedcba9876543210ull;
  const std::string text = ConfigToJson(c);
  const ScenarioConfig back = ConfigFromJson(text);
  EXPECT_EQ(ConfigToJson(back), text);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.scheme, Scheme::kNeighborLs);
  EXPECT_EQ(back.D, c.D);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(ConfigFromJson(R"({"N": 16, "bogus": 1})"), ConfigError);
  EXPECT_THROW(ConfigFromJson(R"({"scheme": "magic"})"), ConfigError);
  EXPECT_THROW(ConfigFromJson("{not json"), ConfigError);
  const ScenarioConfig partial = ConfigFromJson(R"({"rho_d": 5.0})");
  EXPECT_EQ(partial.rho_d, 5.0);
  EXPECT_EQ(partial.N, 100);
}

TEST(Config, Invariants) {
  ScenarioConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.tau_u = 10;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = ScenarioConfig{};
  c.array_cols = 9;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = ScenarioConfig{};
  c.K = 101;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = ScenarioConfig{};
  c.scheme = Scheme::kArgos;
  c.tau_d = 5;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(Config, ApplyParameter) {
  ScenarioConfig c;
  ApplyParameter(c, "K", 40);
  EXPECT_EQ(c.K, 40);
  EXPECT_EQ(c.tau_u, 40);
  ApplyParameter(c, "rho_d", -5.0);
  EXPECT_EQ(c.rho_d, -5.0);
  ApplyParameter(c, "sigma_M2_db", -12.5);
  EXPECT_EQ(c.sigma_M2_db, -12.5);
  ApplyParameter(c, "D", 0.0);
  EXPECT_EQ(c.D, 0.0);
  ApplyParameter(c, "iters", 7);
  EXPECT_EQ(c.iters, 7);
  EXPECT_THROW(ApplyParameter(c, "K", 2.5), ConfigError);
  EXPECT_THROW(ApplyParameter(c, "T", 100), ConfigError);
}

TEST(Presets, Axes) {
  EXPECT_EQ(PresetNames().size(), 6u);
  const SweepSpec fig6 = Preset("fig6");
  EXPECT_EQ(fig6.param, "iters");
  EXPECT_EQ(fig6.values, (std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(fig6.base.blocks_per_trial, 0);
  const SweepSpec fig7 = Preset("fig7");
  EXPECT_EQ(fig7.param, "K");
  EXPECT_EQ(fig7.values, (std::vector<double>{10, 20, 30, 40, 50, 60, 70}));
  EXPECT_EQ(fig7.series.size(), 6u);
  EXPECT_EQ(Preset("fig2").param, "rho_d");
  EXPECT_THROW(Preset("fig3"), ConfigError);
}

TEST(Sweep, EmptyValuesRejected) {
  SweepSpec s;
  s.param = "rho_d";
  s.series = {{}};
  EXPECT_THROW(RunSweep(s), ConfigError);
  s.values = {1.0};
  s.param = "T";
  EXPECT_THROW(RunSweep(s), ConfigError);
}

TEST(Output, CsvHeaderAndFormat) {
  const std::string csv = Csv({});
  EXPECT_EQ(csv,
            "scheme,precoder,param_name,param_value,spectral_efficiency,mse_B,mse_A,"
            "mean_log_term,trials,ci_halfwidth\n");
  EXPECT_EQ(CsvColumns().size(), 10u);
  MetricsRecord r;
  r.scheme = "argos";
  r.precoder = "zf";
  r.param_name = "K";
  r.param_value = 10;
  r.trials = 3;
  const std::string row = Csv({r}).substr(csv.size());
  EXPECT_EQ(row.rfind("argos,zf,K,10,", 0), 0u) << row;
  std::ostringstream js;
  WriteJson(js, {r});
  EXPECT_NE(js.str().find("\"scheme\""), std::string::npos);
}

TEST(Runner, BookkeepingIdentityPerRow) {
  for (Scheme s : {Scheme::kNrcAwareProposed, Scheme::kArgos}) {
    const ScenarioConfig c = SmallConfig(s);
    const ScenarioResult res = RunScenario(c);
    ASSERT_EQ(res.spectral_efficiency.size(), 4u);
    for (std::size_t t = 0; t < res.spectral_efficiency.size(); ++t) {
      EXPECT_NEAR(res.spectral_efficiency[t],
                  c.K * c.PrefactorFraction() * res.mean_log_term[t], 1e-12);
    }
    const MetricsRecord r = res.Summary();
    EXPECT_NEAR(r.spectral_efficiency,
                c.K * (1.0 - double(c.OverheadSymbols()) / c.T) * r.mean_log_term, 1e-12);
    EXPECT_EQ(r.trials, 4);
    EXPECT_GT(r.ci_halfwidth, 0.0);
  }
}

TEST(Runner, RepeatRunsAreIdentical) {
  ScenarioConfig c = SmallConfig(Scheme::kNrcAwareProposed);
  c.trials = 1;
  c.blocks_per_trial = 1;
  const std::string a = Csv({RunScenario(c).Summary("x", 1.0)});
  const std::string b = Csv({RunScenario(c).Summary("x", 1.0)});
  EXPECT_EQ(a, b);
}

TEST(Runner, WorkerCountDoesNotChangeResults) {
  const ScenarioConfig c = SmallConfig(Scheme::kNrcAwareProposed);
  RunOptions one;
  RunOptions three;
  three.workers = 3;
  EXPECT_EQ(Csv({RunScenario(c, one).Summary()}), Csv({RunScenario(c, three).Summary()}));
}

TEST(Runner, SchemesShareRandomNumbers) {
  // Perfect and proposed differ only in the NRC estimates: perfect reports
  // zero error, the proposed estimator a small positive one.
  const ScenarioResult perfect = RunScenario(SmallConfig(Scheme::kNrcAwarePerfect));
  const ScenarioResult proposed = RunScenario(SmallConfig(Scheme::kNrcAwareProposed));
  EXPECT_EQ(perfect.mse_B[0], 0.0);
  EXPECT_GT(proposed.mse_B[0], 0.0);
  EXPECT_LT(proposed.mse_B[0], 1.0);
}

TEST(Runner, EstimationOnlyRun) {
  ScenarioConfig c = SmallConfig(Scheme::kNrcAwareProposed);
  c.blocks_per_trial = 0;
  RunOptions opt;
  opt.keep_iteration_history = true;
  const ScenarioResult res = RunScenario(c, opt);
  ASSERT_EQ(res.mse_B_by_iter.size(), static_cast<std::size_t>(c.iters));
  EXPECT_EQ(res.mse_B_by_iter.back(), res.mse_B);
  EXPECT_TRUE(std::isnan(res.mean_log_term[0]));
}

TEST(Sweep, IterationShortcutMatchesSeparateRuns) {
  SweepSpec s;
  s.base = SmallConfig(Scheme::kNrcAwareProposed);
  s.base.blocks_per_trial = 0;
  s.param = "iters";
  s.values = {1, 3};
  s.series = {{Scheme::kNrcAwareProposed, PrecoderKind::kZf, 1.0}};
  const auto rows = RunSweep(s);
  ASSERT_EQ(rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    ScenarioConfig c = s.base;
    c.iters = static_cast<int>(s.values[i]);
    const MetricsRecord direct = RunScenario(c).Summary();
    EXPECT_EQ(rows[i].mse_B, direct.mse_B) << i;
    EXPECT_EQ(rows[i].mse_A, direct.mse_A) << i;
    EXPECT_EQ(rows[i].param_value, s.values[i]);
  }
  EXPECT_EQ(rows[0].scheme, "nrc-aware-proposed/D=1");
}

TEST(Sweep, SeedReproducibleCsv) {
  SweepSpec s;
  s.base = SmallConfig(Scheme::kNrcAwarePerfect);
  s.base.trials = 2;
  s.param = "rho_d";
  s.values = {0.0, 10.0};
  s.series = {{Scheme::kNrcAwarePerfect, PrecoderKind::kZf, std::nullopt},
              {Scheme::kNrcBlind, PrecoderKind::kMrt, std::nullopt}};
  const std::string a = Csv(RunSweep(s));
  EXPECT_EQ(a, Csv(RunSweep(s)));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 5);
}

TEST(Runner, BlindPrecodingLosesAtHighSnr) {
  ScenarioConfig perfect = SmallConfig(Scheme::kNrcAwarePerfect);
  perfect.trials = 20;
  perfect.rho_d = 20.0;
  ScenarioConfig blind = perfect;
  blind.scheme = Scheme::kNrcBlind;
  // Both runs see the same channels, so the per-trial difference is paired.
  const ScenarioResult p = RunScenario(perfect);
  const ScenarioResult b = RunScenario(blind);
  std::vector<double> drop;
  for (std::size_t t = 0; t < p.spectral_efficiency.size(); ++t) {
    drop.push_back(p.spectral_efficiency[t] - b.spectral_efficiency[t]);
  }
  const MeanCi d = MeanWithCi(drop);
  EXPECT_GT(d.mean, 5.0 * d.halfwidth);
}

}  // namespace
}  // namespace nrc
