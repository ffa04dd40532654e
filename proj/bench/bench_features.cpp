// Parallel vs serial population-feature kernel on random snapshots.
// Arguments are population size N and dimension D.

#include <benchmark/benchmark.h>

#include "aos/features.hpp"
#include "aos/random.hpp"

namespace {

aos::BinaryVector random_bits(std::size_t d, aos::RandomStream& rng) {
  aos::BinaryVector v(d);
  for (std::size_t i = 0; i < d; ++i) v.set(i, rng.bernoulli(0.5));
  return v;
}

aos::PopulationSnapshot make_snapshot(std::size_t n, std::size_t d) {
  aos::RandomStream rng(11);
  aos::PopulationSnapshot s;
  for (std::size_t i = 0; i < n; ++i) {
    s.parents.push_back(random_bits(d, rng));
    s.children.push_back(random_bits(d, rng));
    s.parent_fitness.push_back(static_cast<double>(s.parents.back().count()));
    s.child_fitness.push_back(static_cast<double>(s.children.back().count()));
    s.trials.push_back(static_cast<int>(rng.below(10)));
  }
  s.global_best = s.parents.front();
  s.global_best_fitness = s.parent_fitness.front();
  s.trial_max = 10;
  return s;
}

void BM_parallel(benchmark::State& state) {
  const auto snap = make_snapshot(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(aos::population_features(snap));
}

void BM_serial(benchmark::State& state) {
  const auto snap = make_snapshot(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(aos::population_features_serial(snap));
}

}  // namespace

BENCHMARK(BM_parallel)->Args({20, 1000})->Args({20, 5000})->Args({100, 100})->Args({200, 500});
BENCHMARK(BM_serial)->Args({20, 1000})->Args({20, 5000})->Args({100, 100})->Args({200, 500});

BENCHMARK_MAIN();
