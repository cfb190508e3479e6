#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>

#include "recip/analysis.hpp"
#include "recip/datagen.hpp"
#include "recip/experiment.hpp"

using namespace recip;

namespace {

const PreferenceMatrices& instance(std::size_t n) {
  static std::map<std::size_t, PreferenceMatrices> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gen_clustered({n, 20, 22, 0.2, {}, 1})).first;
  return it->second;
}

// range(1) == 0 runs the serial reference, otherwise the OpenMP kernel with that many threads.
void set_threads(benchmark::State& state) {
  if (state.range(1) > 0) omp_set_num_threads(static_cast<int>(state.range(1)));
}

void BuildMatchingGraph(benchmark::State& state) {
  const auto& p = instance(static_cast<std::size_t>(state.range(0)));
  set_threads(state);
  for (auto _ : state) {
    auto g = state.range(1) == 0 ? build_matching_graph_serial(p) : build_matching_graph(p);
    benchmark::DoNotOptimize(g);
  }
}

void GreedyCovering(benchmark::State& state) {
  const auto& p = instance(static_cast<std::size_t>(state.range(0)));
  const auto cols = girl_columns(p);
  const auto radius = standard_radii(p.n())[1];
  set_threads(state);
  for (auto _ : state) {
    auto c = state.range(1) == 0 ? greedy_covering_serial(cols, radius) : greedy_covering(cols, radius);
    benchmark::DoNotOptimize(c);
  }
}

void RunBatch(benchmark::State& state) {
  const auto& p = instance(static_cast<std::size_t>(state.range(0)));
  const BatchSpec spec{{"oomm", "ismile"}, {}, 2 * p.n() * p.n(), {1, 2, 3, 4}, 1000, false};
  set_threads(state);
  for (auto _ : state) {
    auto r = state.range(1) == 0 ? run_batch_serial(p, spec) : run_batch(p, spec);
    benchmark::DoNotOptimize(r);
  }
}

void thread_grid(benchmark::internal::Benchmark* b, std::initializer_list<std::int64_t> sizes) {
  const std::int64_t hw = omp_get_num_procs();
  for (auto n : sizes) {
    b->Args({n, 0});
    for (std::int64_t t = 1; t <= hw; t *= 2) b->Args({n, t});
  }
  b->ArgNames({"n", "threads"})->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BuildMatchingGraph)->Apply([](auto* b) { thread_grid(b, {400, 2000}); });
BENCHMARK(GreedyCovering)->Apply([](auto* b) { thread_grid(b, {400, 1000}); });
BENCHMARK(RunBatch)->Apply([](auto* b) { thread_grid(b, {200, 400}); });

BENCHMARK_MAIN();
