// SPDX-License-Identifier: Apache-2.0

#include "nrc/harness/runner.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "nrc/baselines.hpp"
#include "nrc/channel_model.hpp"
#include "nrc/harness/metrics.hpp"
#include "nrc/nrc_estimation.hpp"

namespace nrc {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Trials (or calibration groups) are independent; results land in per-index
// slots so the reduction order never depends on the worker count.
template <class F>
void ParallelFor(int n, int workers, F&& body) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

struct Context {
  ScenarioConfig cfg;
  NrcVariances var;
  ArrayGeometry geometry;
  CMatrix Z;
  SparsitySupport support = SparsitySupport::Diagonal(1);
  CMatrix X;
  CMatrix C;
  std::vector<std::pair<int, int>> pairs;
  double rho_u = 1.0;
  double rho_d = 1.0;
  double rho_tilde_u = 1.0;
  double rho_tilde_d = 1.0;
  int data_symbols = 0;
};

// Identifies a trial (prefix 0) or an alpha calibration group.
struct Unit {
  std::uint64_t prefix = 0;
  std::uint64_t index = 0;
};

Rng Stream(const Context& ctx, Unit u, std::uint64_t tag,
           std::initializer_list<std::uint64_t> rest = {}) {
  std::vector<std::uint64_t> path;
  if (u.prefix != 0) path.push_back(u.prefix);
  path.push_back(tag);
  path.push_back(u.index);
  path.insert(path.end(), rest.begin(), rest.end());
  return Rng::Derive(ctx.cfg.seed, path);
}

struct Calibration {
  std::optional<NrcCompensator> compensator;
  bool reciprocal = false;
  double mse_B = kNan;
  double mse_A = kNan;
  std::vector<double> mse_B_by_iter;
  std::vector<double> mse_A_by_iter;
  bool rank_deficient = false;
};

Calibration Calibrate(const Context& ctx, const NrcRealization& nrc, Unit unit,
                      bool history) {
  const ScenarioConfig& cfg = ctx.cfg;
  Calibration cal;
  switch (cfg.scheme) {
    case Scheme::kReciprocalIdeal:
      cal.reciprocal = true;
      break;
    case Scheme::kNrcBlind:
      break;
    case Scheme::kNrcAwarePerfect:
      cal.compensator.emplace(nrc.B, CVector(nrc.A.diagonal()));
      cal.mse_B = 0.0;
      cal.mse_A = 0.0;
      break;
    case Scheme::kNrcAwareProposed: {
      std::vector<CMatrix> Q_list;
      std::vector<CMatrix> G_list;
      Q_list.reserve(cfg.C_sc);
      G_list.reserve(cfg.C_sc);
      for (int l = 0; l < cfg.C_sc; ++l) {
        Rng rng = Stream(ctx, unit, kStreamEstimation, {static_cast<std::uint64_t>(l)});
        const CMatrix P = GenPhysicalChannel(cfg.N, cfg.K, rng);
        const ChannelSet cs = AssembleChannels(P, nrc, l);
        G_list.push_back(UlTrainAndEstimate(cs.G, ctx.rho_u, cfg.tau_u, rng));
        const RoundTrip rt =
            Roundtrip(cs.G, cs.H, ctx.X, ctx.rho_tilde_d, ctx.rho_tilde_u, rng);
        Q_list.push_back(ProcessObservation(rt.Y, ctx.X, ctx.rho_tilde_u,
                                            ctx.rho_tilde_d, l)
                             .Q);
      }
      EstimationOptions opt;
      opt.iters = cfg.iters;
      opt.keep_history = history;
      const EstimationResult est = IterateEstimate(
          Q_list, G_list, ctx.support, ctx.rho_tilde_u, ctx.rho_tilde_d, opt);
      cal.rank_deficient = !est.rank_deficient_columns.empty();
      const CMatrix A_true = nrc.A.toDenseMatrix();
      cal.mse_B = NormalizedMse(nrc.B, est.B_hat, Side::kBs);
      cal.mse_A = NormalizedMse(A_true, est.A_hat.toDenseMatrix(), Side::kUe);
      for (const auto& h : est.history) {
        cal.mse_B_by_iter.push_back(NormalizedMse(nrc.B, h.B_hat, Side::kBs));
        cal.mse_A_by_iter.push_back(
            NormalizedMse(A_true, CMatrix(h.a_hat.asDiagonal()), Side::kUe));
      }
      cal.compensator.emplace(est.B_hat, est.xi_hat);
      break;
    }
    case Scheme::kArgos:
    case Scheme::kNeighborLs: {
      Rng rng = Stream(ctx, unit, kStreamCoupling);
      const CouplingMeasurement m =
          MeasureCoupling(nrc, ctx.C, ctx.pairs, cfg.coupling_snr_db, rng);
      const CalibrationResult res = cfg.scheme == Scheme::kArgos
                                        ? ArgosCalibrate(m, cfg.N)
                                        : NeighborLsCalibrate(m, cfg.N);
      // Only relative calibration matters for beamforming; the MSE is taken
      // after pinning the free complex scale to the true b_0.
      cal.mse_B = NormalizedMse(nrc.B, nrc.B(0, 0) * res.B_hat, Side::kBs);
      cal.compensator.emplace(res.B_hat);
      break;
    }
  }
  return cal;
}

struct BlockDraw {
  CMatrix H;
  Precoder p;
};

std::vector<BlockDraw> DrawBlocks(const Context& ctx, const NrcRealization& nrc,
                                  const Calibration& cal, Unit unit) {
  const ScenarioConfig& cfg = ctx.cfg;
  std::vector<BlockDraw> blocks;
  std::vector<CMatrix> raw;
  blocks.reserve(static_cast<std::size_t>(cfg.blocks_per_trial) * cfg.data_subcarriers);
  double power_sum = 0.0;
  for (int b = 0; b < cfg.blocks_per_trial; ++b) {
    for (int d = 0; d < cfg.data_subcarriers; ++d) {
      Rng rng = Stream(ctx, unit, kStreamChannel,
                       {static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(d)});
      const CMatrix P = GenPhysicalChannel(cfg.N, cfg.K, rng);
      BlockDraw draw;
      ChannelSet cs = AssembleChannels(P, nrc, d);
      CMatrix G = std::move(cs.G);
      // The ideal reference keeps the same hardware on the uplink but a
      // perfectly reciprocal downlink.
      draw.H = cal.reciprocal ? CMatrix(G.transpose()) : std::move(cs.H);
      const CMatrix G_hat = UlTrainAndEstimate(G, ctx.rho_u, cfg.tau_u, rng);
      CMatrix W = RawPrecoder(G_hat.transpose(), cfg.precoder);
      if (cal.compensator) W = cal.compensator->Transform(W);
      power_sum += W.squaredNorm();
      draw.p.kind = cfg.precoder;
      draw.p.nrc_corrected = cal.compensator.has_value();
      raw.push_back(std::move(W));
      blocks.push_back(std::move(draw));
    }
  }
  Normalization norm;
  if (cfg.beta_convention == BetaConvention::kEnsemble && !raw.empty()) {
    norm.ensemble_power = power_sum / static_cast<double>(raw.size());
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i].p.beta = norm.Beta(raw[i]);
    blocks[i].p.U = blocks[i].p.beta * raw[i];
  }
  return blocks;
}

GainStatistics CalibrateGain(const Context& ctx, int workers) {
  const ScenarioConfig& cfg = ctx.cfg;
  const int per_group = cfg.blocks_per_trial * cfg.data_subcarriers;
  const int groups = (cfg.alpha_mc + per_group - 1) / per_group;
  std::vector<std::vector<CVector>> samples(groups);
  ParallelFor(groups, workers, [&](int g) {
    const Unit unit{kStreamGainCalibration, static_cast<std::uint64_t>(g)};
    Rng nrc_rng = Stream(ctx, unit, kStreamNrc);
    const NrcRealization nrc = DrawNrc(ctx.Z, cfg.K, ctx.var, nrc_rng);
    const Calibration cal = Calibrate(ctx, nrc, unit, false);
    for (const BlockDraw& b : DrawBlocks(ctx, nrc, cal, unit)) {
      samples[g].push_back(BeamformedGains(b.H, b.p).diagonal());
    }
  });
  return EffectiveGain(
      [&](int i) -> CVector { return samples[i / per_group][i % per_group]; },
      cfg.alpha_mc);
}

struct TrialOutcome {
  double mean_log_term = kNan;
  double mse_B = kNan;
  double mse_A = kNan;
  std::vector<double> mse_B_by_iter;
  std::vector<double> mse_A_by_iter;
  bool rank_deficient = false;
};

TrialOutcome RunTrial(const Context& ctx, const GainStatistics& alpha, int t,
                      bool history) {
  const ScenarioConfig& cfg = ctx.cfg;
  const Unit unit{0, static_cast<std::uint64_t>(t)};
  Rng nrc_rng = Stream(ctx, unit, kStreamNrc);
  const NrcRealization nrc = DrawNrc(ctx.Z, cfg.K, ctx.var, nrc_rng);
  Calibration cal = Calibrate(ctx, nrc, unit, history);

  TrialOutcome out;
  out.mse_B = cal.mse_B;
  out.mse_A = cal.mse_A;
  out.mse_B_by_iter = std::move(cal.mse_B_by_iter);
  out.mse_A_by_iter = std::move(cal.mse_A_by_iter);
  out.rank_deficient = cal.rank_deficient;
  if (cfg.blocks_per_trial == 0) return out;

  const std::vector<BlockDraw> blocks = DrawBlocks(ctx, nrc, cal, unit);
  const bool pilots = IsBaseline(cfg.scheme);
  double log_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto b = static_cast<std::uint64_t>(i) / cfg.data_subcarriers;
    const auto d = static_cast<std::uint64_t>(i) % cfg.data_subcarriers;
    CVector alpha_hat = alpha.mean;
    if (pilots) {
      Rng pilot_rng = Stream(ctx, unit, kStreamData, {b, d, 1});
      alpha_hat = DlPilotCsi(blocks[i].H, blocks[i].p, cfg.EffectiveTauD(),
                             ctx.rho_d, alpha.mean, alpha.variance, pilot_rng);
    }
    Rng data_rng = Stream(ctx, unit, kStreamData, {b, d, 0});
    const CMatrix s = QpskSymbols(cfg.K, ctx.data_symbols, data_rng);
    const LinkBlock link =
        DlTransmitReceive(blocks[i].H, blocks[i].p, s, ctx.rho_d, alpha_hat, data_rng);
    const RVector sinr = InstantaneousSinr(link, alpha_hat, ctx.rho_d, cfg.sinr_cap);
    for (Eigen::Index k = 0; k < sinr.size(); ++k) log_sum += std::log2(1.0 + sinr(k));
    count += static_cast<std::size_t>(sinr.size());
  }
  out.mean_log_term = log_sum / static_cast<double>(count);
  return out;
}

Context MakeContext(const ScenarioConfig& cfg) {
  Context ctx;
  ctx.cfg = cfg;
  ctx.var = cfg.Variances();
  ctx.geometry = cfg.Geometry();
  ctx.Z = ArrayImpedance(ctx.geometry);
  ctx.support = SparsitySupport::FromGeometry(ctx.geometry, cfg.D);
  ctx.rho_u = DbToLinear(cfg.rho_u);
  ctx.rho_d = DbToLinear(cfg.rho_d);
  ctx.rho_tilde_u = DbToLinear(cfg.rho_tilde_u);
  ctx.rho_tilde_d = DbToLinear(cfg.rho_tilde_d);
  ctx.data_symbols = cfg.T - cfg.OverheadSymbols();
  if (cfg.scheme == Scheme::kNrcAwareProposed) ctx.X = GenPilotMatrix(cfg.N);
  if (IsBaseline(cfg.scheme)) {
    ctx.C = CouplingChannel(ctx.Z, cfg.coupling_snr_db);
    ctx.pairs = cfg.scheme == Scheme::kArgos
                    ? StarPairs(cfg.N)
                    : NeighborPairs(ctx.geometry, cfg.neighbor_radius);
  }
  return ctx;
}

}  // namespace

MetricsRecord ScenarioResult::Summary(const std::string& param_name,
                                      double param_value) const {
  MetricsRecord r;
  r.scheme = ToString(config.scheme);
  r.precoder = ToString(config.precoder);
  r.param_name = param_name;
  r.param_value = param_value;
  const MeanCi se = MeanWithCi(spectral_efficiency);
  r.spectral_efficiency = se.mean;
  r.ci_halfwidth = se.halfwidth;
  r.mean_log_term = MeanWithCi(mean_log_term).mean;
  r.mse_B = MeanWithCi(mse_B).mean;
  r.mse_A = MeanWithCi(mse_A).mean;
  r.trials = static_cast<int>(mean_log_term.size());
  return r;
}

ScenarioResult RunScenario(const ScenarioConfig& config, const RunOptions& options) {
  config.Validate();
  const Context ctx = MakeContext(config);

  ScenarioResult res;
  res.config = config;
  if (config.blocks_per_trial > 0) res.alpha = CalibrateGain(ctx, options.workers);

  std::vector<TrialOutcome> trials(config.trials);
  ParallelFor(config.trials, options.workers, [&](int t) {
    trials[t] = RunTrial(ctx, res.alpha, t, options.keep_iteration_history);
  });

  const bool history = options.keep_iteration_history &&
                       config.scheme == Scheme::kNrcAwareProposed;
  if (history) {
    res.mse_B_by_iter.assign(config.iters, std::vector<double>(config.trials));
    res.mse_A_by_iter.assign(config.iters, std::vector<double>(config.trials));
  }
  for (int t = 0; t < config.trials; ++t) {
    const TrialOutcome& o = trials[t];
    res.mean_log_term.push_back(o.mean_log_term);
    res.spectral_efficiency.push_back(
        std::isnan(o.mean_log_term) ? kNan : SpectralEfficiency(config, o.mean_log_term));
    res.mse_B.push_back(o.mse_B);
    res.mse_A.push_back(o.mse_A);
    if (o.rank_deficient) ++res.rank_deficient_trials;
    if (history) {
      for (int m = 0; m < config.iters; ++m) {
        res.mse_B_by_iter[m][t] = o.mse_B_by_iter[m];
        res.mse_A_by_iter[m][t] = o.mse_A_by_iter[m];
      }
    }
  }
  return res;
}

}  // namespace nrc
