#include "ciota/emm.hpp"

#include "ciota/rng.hpp"
#include "ciota/traces.hpp"

#include <benchmark/benchmark.h>

using namespace ciota;

namespace {

FrequencyMatrix trained_model(std::size_t regions, std::size_t steps,
                              std::uint64_t seed) {
  GroundTruthModel gt = make_uniform_model(regions, 4, seed, 256);
  Rng rng(seed);
  return sample_model(gt, steps, rng);
}

} // namespace

static void BM_record_transition(benchmark::State& state) {
  FrequencyMatrix model;
  Rng rng(1);
  std::vector<std::pair<State, State>> transitions;
  for (int i = 0; i < 1024; ++i) {
    transitions.emplace_back(rng.below(256), rng.below(256));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [from, to] = transitions[i++ & 1023];
    model.record(from, to);
  }
  benchmark::DoNotOptimize(model);
}
BENCHMARK(BM_record_transition);

static void BM_probability_lookup(benchmark::State& state) {
  const FrequencyMatrix model = trained_model(128, 100000, 7);
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.probability(rng.below(128), rng.below(128)));
  }
}
BENCHMARK(BM_probability_lookup);

static void BM_window_push(benchmark::State& state) {
  ScoreWindow window(static_cast<std::size_t>(state.range(0)));
  double p = 0.25;
  for (auto _ : state) {
    window.push(p);
    benchmark::DoNotOptimize(window.mean());
  }
}
BENCHMARK(BM_window_push)->Arg(10)->Arg(10000);

static void BM_combine(benchmark::State& state) {
  std::vector<FrequencyMatrix> models;
  for (int i = 0; i < 20; ++i) models.push_back(trained_model(64, 20000, i));
  for (auto _ : state) {
    benchmark::DoNotOptimize(combine(models, 0.25));
  }
}
BENCHMARK(BM_combine);

static void BM_distance(benchmark::State& state) {
  const FrequencyMatrix a = trained_model(64, 20000, 3);
  const FrequencyMatrix b = trained_model(64, 20000, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance(a, b));
  }
}
BENCHMARK(BM_distance);

BENCHMARK_MAIN();
