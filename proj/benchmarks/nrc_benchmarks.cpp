// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "nrc/channel_model.hpp"
#include "nrc/harness/runner.hpp"
#include "nrc/nrc_estimation.hpp"
#include "nrc/precoding.hpp"

namespace {

using namespace nrc;

// One subcarrier of the baseline array: N = 100 on a 10x10 grid.
struct Instance {
  ArrayGeometry geom = ArrayGeometry::Rectangular(10, 10);
  SparsitySupport support;
  CMatrix G;
  CMatrix Q;

  Instance(int K, double D) : support(SparsitySupport::FromGeometry(geom, D)) {
    Rng rng(42);
    const NrcRealization nrc = DrawNrc(ArrayImpedance(geom), K, {0.01, 0.01, 0.01}, rng);
    const ChannelSet cs = AssembleChannels(GenPhysicalChannel(100, K, rng), nrc);
    const CMatrix X = GenPilotMatrix(100);
    Q = ProcessObservation(Roundtrip(cs.G, cs.H, X, 10.0, 1.0, rng).Y, X, 1.0, 10.0).Q;
    G = cs.G;
  }
};

void BM_SolverSetup(benchmark::State& state) {
  const Instance in(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    AlternatingSolver s(in.Q, in.G, in.support, 1.0, 10.0);
    benchmark::DoNotOptimize(&s);
  }
}
BENCHMARK(BM_SolverSetup)->Arg(20)->Arg(70)->Unit(benchmark::kMicrosecond);

void BM_BStep(benchmark::State& state) {
  const Instance in(static_cast<int>(state.range(0)), state.range(1) / 10.0);
  const AlternatingSolver s(in.Q, in.G, in.support, 1.0, 10.0);
  const CVector a = CVector::Ones(in.G.cols());
  for (auto _ : state) benchmark::DoNotOptimize(s.BStep(a));
}
BENCHMARK(BM_BStep)->Args({20, 0})->Args({20, 10})->Args({20, 14})->Args({70, 10})
    ->Unit(benchmark::kMicrosecond);

void BM_AStep(benchmark::State& state) {
  const Instance in(static_cast<int>(state.range(0)), 1.0);
  const AlternatingSolver s(in.Q, in.G, in.support, 1.0, 10.0);
  const CMatrix B = s.BStep(CVector::Ones(in.G.cols()));
  for (auto _ : state) benchmark::DoNotOptimize(s.AStep(B));
}
BENCHMARK(BM_AStep)->Arg(20)->Arg(70)->Unit(benchmark::kMicrosecond);

void BM_IterateEstimate(benchmark::State& state) {
  const Instance in(20, 1.0);
  const std::vector<CMatrix> Qs(10, in.Q);
  const std::vector<CMatrix> Gs(10, in.G);
  for (auto _ : state) {
    benchmark::DoNotOptimize(IterateEstimate(Qs, Gs, in.support, 1.0, 10.0));
  }
}
BENCHMARK(BM_IterateEstimate)->Unit(benchmark::kMillisecond);

void BM_NrcAwareZf(benchmark::State& state) {
  const Instance in(20, 1.0);
  const Precoder p = MakePrecoder(in.G.transpose(), PrecoderKind::kZf);
  const NrcCompensator comp(CMatrix::Identity(100, 100) + 0.01 * in.Q);
  for (auto _ : state) benchmark::DoNotOptimize(comp.Apply(p));
}
BENCHMARK(BM_NrcAwareZf)->Unit(benchmark::kMicrosecond);

void BM_ArrayImpedance(benchmark::State& state) {
  const ArrayGeometry geom = ArrayGeometry::Rectangular(10, 10);
  for (auto _ : state) benchmark::DoNotOptimize(ArrayImpedance(geom));
}
BENCHMARK(BM_ArrayImpedance)->Unit(benchmark::kMicrosecond);

void BM_Trial(benchmark::State& state) {
  ScenarioConfig c;
  c.trials = 1;
  c.blocks_per_trial = static_cast<int>(state.range(0));
  c.alpha_mc = 200;
  for (auto _ : state) benchmark::DoNotOptimize(RunScenario(c));
}
BENCHMARK(BM_Trial)->Arg(0)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
