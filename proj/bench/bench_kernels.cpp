// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "pamod/generator.hpp"
#include "pamod/harness.hpp"
#include "pamod/modularity.hpp"
#include "pamod/stats.hpp"

using namespace pamod;

namespace {

const PAGraph& fixture_graph() {
  static const PAGraph g = generate_graph(200'000, 16, 11);
  return g;
}

VertexSubset fixture_subset() {
  Rng rng(3);
  return sample_subset(Sampler::uniform_half, 0, 200'000, 16, rng);
}

void BM_SubsetCounts(benchmark::State& state) {
  const PAGraph& g = fixture_graph();
  const VertexSubset s = fixture_subset();
  for (auto _ : state) benchmark::DoNotOptimize(subset_counts(g.graph, s));
  state.SetItemsProcessed(state.iterations() * g.graph.num_edges());
}

void BM_SubsetCountsSerial(benchmark::State& state) {
  const PAGraph& g = fixture_graph();
  const VertexSubset s = fixture_subset();
  for (auto _ : state) benchmark::DoNotOptimize(reference::subset_counts(g.graph, s));
  state.SetItemsProcessed(state.iterations() * g.graph.num_edges());
}

ExperimentConfig concentration_config() {
  ExperimentConfig c;
  c.n = 5000;
  c.h = 16;
  c.trials = 4;
  c.subsets_per_trial = 5;
  c.base_seed = 1;
  return c;
}

void BM_Concentration(benchmark::State& state) {
  const ExperimentConfig c = concentration_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_concentration(c));
}

void BM_ConcentrationSerial(benchmark::State& state) {
  const ExperimentConfig c = concentration_config();
  for (auto _ : state) benchmark::DoNotOptimize(reference::run_concentration(c));
}

void BM_GHat(benchmark::State& state) {
  const auto method = static_cast<GHatMethod>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_ghat(state.range(0), seed++, method));
}

void BM_Greedy(benchmark::State& state) {
  const PAGraph g = generate_graph(static_cast<vertex_t>(state.range(0)), 4, 5);
  GreedyOptions options;
  options.backend = static_cast<GreedyBackend>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(modularity_greedy(g.graph, options));
}

}  // namespace

BENCHMARK(BM_SubsetCounts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SubsetCountsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Concentration)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConcentrationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GHat)
    ->ArgsProduct({{500, 2000}, {static_cast<long>(GHatMethod::skip),
                                 static_cast<long>(GHatMethod::naive)}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Greedy)
    ->ArgsProduct({{2000}, {static_cast<long>(GreedyBackend::dense),
                            static_cast<long>(GreedyBackend::sparse)}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
