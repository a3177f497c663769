#include <benchmark/benchmark.h>

#include "pivotlab/partitions.hpp"
#include "pivotlab/pivots.hpp"
#include "pivotlab/schottky.hpp"
#include "pivotlab/word.hpp"
#include "pivotlab/word_tree.hpp"

using namespace pivotlab;

namespace {

const AlternatingSpec& spec() {
  static const AlternatingSpec s = canonical_alternating_spec(8, 102);
  return s;
}

void BM_Multiply(benchmark::State& state) {
  CounterRng rng(StreamKey(1));
  const auto len = state.range(0);
  const ReducedWord x = random_reduced_word(rng, 8, len);
  const ReducedWord y = random_reduced_word(rng, 8, len);
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_Multiply)->Arg(16)->Arg(256)->Arg(4096);

void BM_GromovProduct(benchmark::State& state) {
  CounterRng rng(StreamKey(2));
  const auto len = state.range(0);
  const ReducedWord x = random_reduced_word(rng, 8, len);
  const ReducedWord y = random_reduced_word(rng, 8, len);
  const ReducedWord z = random_reduced_word(rng, 8, len);
  for (auto _ : state) benchmark::DoNotOptimize(gromov_product(x, y, z));
}
BENCHMARK(BM_GromovProduct)->Arg(16)->Arg(256)->Arg(4096);

void BM_TreeDistance(benchmark::State& state) {
  const AlternatingPath path = sample_alternating(spec(), state.range(0) + 1, 3);
  const PathGeometry g(path);
  const WordTree& t = g.tree();
  std::int64_t i = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t.dist(g.y(i), g.y_plus(state.range(0) + 1 - i)));
    i = i % state.range(0) + 1;
  }
}
BENCHMARK(BM_TreeDistance)->Arg(500)->Arg(8000);

void BM_SampleAlternating(benchmark::State& state) {
  const AlternatingSampler sampler(spec());
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(state.range(0), 1, trial++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleAlternating)->Arg(500)->Arg(8000);

void BM_PivotsPerBlock(benchmark::State& state) {
  const auto blocks = state.range(0);
  const auto check = static_cast<ChainCheck>(state.range(1));
  const AlternatingPath path = sample_alternating(spec(), blocks + 1, 5);
  PathGeometry g(path);
  const PivotParams params = pivot_params_for(spec().schottky, check);
  for (auto _ : state) benchmark::DoNotOptimize(run_pivots(g, blocks, params).pivotal_times().size());
  state.SetItemsProcessed(state.iterations() * blocks);
}
BENCHMARK(BM_PivotsPerBlock)
    ->Args({500, static_cast<int>(ChainCheck::none)})
    ->Args({500, static_cast<int>(ChainCheck::incremental)})
    ->Args({500, static_cast<int>(ChainCheck::full)});

void BM_PinDownTrial(benchmark::State& state) {
  const std::int64_t n = state.range(0), alpha = 50, L = 5000;
  const std::int64_t H = 4 * n;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    const AlternatingPath path = sample_alternating(spec(), H + 1, 7, trial++);
    const PathGeometry g(path);
    const PivotState s = run_pivots(g, H, pivot_params_for(spec().schottky, ChainCheck::none));
    const PivotReport r = stable_pivots(g, s, 0.8);
    const ThetaWalkView view(path, g, n);
    const PartitionData d = build_partition(view, r.stable_pivots, n, alpha, L);
    const RunWord proxy = g.tree().runs(g.position(H));
    benchmark::DoNotOptimize(pin_down(d, proxy, HalfInt(2), 8).candidates.size());
  }
}
BENCHMARK(BM_PinDownTrial)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
