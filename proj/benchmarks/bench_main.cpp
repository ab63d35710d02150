#include <benchmark/benchmark.h>

#include <numbers>

#include "crio/gm.hpp"
#include "crio/graphstate.hpp"
#include "crio/povm.hpp"
#include "crio/protocol.hpp"

using namespace crio;

namespace {

CrioConfig random_config(int N, Rng& rng) {
  CrioConfig c;
  c.N = N;
  for (int i = 0; i < N; ++i) {
    c.axes.push_back(PauliAxis::random(rng));
    c.betas.push_back(2 * std::numbers::pi * uniform01(rng));
    c.targets.push_back(QuantumState::random({"O"}, rng).amplitudes());
  }
  return c;
}

void BM_GraphState(benchmark::State& state) {
  const Graph g = crio_graph(CrioTopology::full(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph_state(g));
}
BENCHMARK(BM_GraphState)->DenseRange(1, 6);

void BM_ControlledSigma(benchmark::State& state) {
  Rng rng(1);
  const int n = static_cast<int>(state.range(0));
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("q" + std::to_string(i));
  QuantumState s = QuantumState::random(labels, rng);
  const Mat2 sigma = pauli_axis_matrix(PauliAxis::random(rng));
  for (auto _ : state) {
    s.apply_controlled(labels.front(), labels.back(), sigma);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_ControlledSigma)->Arg(8)->Arg(12)->Arg(16);

void BM_ProtocolEnumerate(benchmark::State& state) {
  Rng rng(2);
  const CrioConfig c = random_config(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(run_crio(c));
}
BENCHMARK(BM_ProtocolEnumerate)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_ProtocolSample(benchmark::State& state) {
  Rng rng(3);
  const CrioConfig c = random_config(static_cast<int>(state.range(0)), rng);
  RunOptions opts;
  opts.mode = RunMode::Sample;
  for (auto _ : state) {
    ++opts.seed;
    benchmark::DoNotOptimize(run_crio(c, opts));
  }
}
BENCHMARK(BM_ProtocolSample)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

void BM_GeometricMeasure(benchmark::State& state) {
  const QuantumState g = g_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gm_optimize(g, GMMode::NonNegative));
}
BENCHMARK(BM_GeometricMeasure)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_OutcomeProbability(benchmark::State& state) {
  const PovmParams p = PovmParams::complete(0.3, 1.1, 0.9, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(outcome_probability(p, 1, 2));
}
BENCHMARK(BM_OutcomeProbability);

void BM_SuccessRate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(success_rate(0.3));
}
BENCHMARK(BM_SuccessRate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
