#include "ctxmatch/estimators.hpp"
#include "ctxmatch/hamiltonian.hpp"
#include "ctxmatch/model.hpp"
#include "ctxmatch/permutation.hpp"

#include <benchmark/benchmark.h>

using namespace ctxmatch;

namespace {

Instance centred(int n, int d) { return relabel_to_identity(sample_instance({n, d, 0.5, 0.4}, 1)); }

void BM_SampleInstance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_instance({n, 64, 0.5, 0.5}, seed++));
}
BENCHMARK(BM_SampleInstance)->Arg(50)->Arg(200)->Arg(500);

void BM_HamiltonianFull(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = centred(n, 64);
  rng::Engine engine(2);
  const Permutation p = Permutation::uniform(n, engine);
  for (auto _ : state) benchmark::DoNotOptimize(hamiltonian(inst, p));
}
BENCHMARK(BM_HamiltonianFull)->Arg(20)->Arg(100)->Arg(500);

void BM_DeltaSwap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = centred(n, 64);
  rng::Engine engine(3);
  const Permutation p = Permutation::uniform(n, engine);
  const HamiltonianBreakdown bd = hamiltonian(inst, p);
  Node i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_swap(inst, p, bd, i, (i + 1) % n));
    i = (i + 1) % n;
  }
}
BENCHMARK(BM_DeltaSwap)->Arg(20)->Arg(100)->Arg(500);

void BM_EvaluatorSwap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = centred(n, 64);
  const HamiltonianEvaluator eval(inst);
  rng::Engine engine(3);
  const Permutation p = Permutation::uniform(n, engine);
  const HamiltonianBreakdown bd = eval.evaluate(p);
  Node i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.swapped(p, bd, i, (i + 1) % n));
    i = (i + 1) % n;
  }
}
BENCHMARK(BM_EvaluatorSwap)->Arg(20)->Arg(100)->Arg(500);

void BM_LogPartition(benchmark::State& state) {
  const Instance inst = centred(static_cast<int>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(log_partition(inst));
}
BENCHMARK(BM_LogPartition)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MapExhaustive(benchmark::State& state) {
  const Instance inst = sample_instance({static_cast<int>(state.range(0)), 64, 0.5, 0.4}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(map_exhaustive(inst));
}
BENCHMARK(BM_MapExhaustive)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_FeatureMap(benchmark::State& state) {
  const Instance inst = sample_instance({static_cast<int>(state.range(0)), 64, 0.5, 0.4}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(feature_map(inst));
}
BENCHMARK(BM_FeatureMap)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_LocalSearch(benchmark::State& state) {
  const Instance inst = sample_instance({static_cast<int>(state.range(0)), 64, 0.5, 0.4}, 6);
  LocalSearchConfig config;
  config.init = LocalInit::random;
  for (auto _ : state) benchmark::DoNotOptimize(local_search_map(inst, config));
}
BENCHMARK(BM_LocalSearch)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TranspositionCount(benchmark::State& state) {
  const Instance inst = sample_instance({static_cast<int>(state.range(0)), 64, 0.3, 0.3}, 7);
  for (auto _ : state) benchmark::DoNotOptimize(transposition_failure_count(inst));
}
BENCHMARK(BM_TranspositionCount)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
