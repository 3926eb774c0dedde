// Serial reference vs OpenMP kernel on the three heaviest loops.
#include <benchmark/benchmark.h>

#include <numbers>

#include "phasebound/phasebound.hpp"

using namespace phasebound;

namespace {

const GhzParityModel ghz{2};

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void BM_BayesTallyTable(benchmark::State& state) {
  const PosteriorFactory f(PriorDensity::family45(10), ghz);
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(bayes_tally_table(f, m, CenterChoice::mean, exec_of(state)));
}

void BM_EchrbGrid(benchmark::State& state) {
  FrequentistOptions o;
  o.exec = exec_of(state);
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(echrb_grid_max(std::numbers::pi / 4, m, ghz, 201, o));
}

void BM_ZivZakai(benchmark::State& state) {
  AverageOptions o;
  o.exec = exec_of(state);
  const auto prior = PriorDensity::family45(10);
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ziv_zakai(prior, m, ghz, o));
}

}  // namespace

// first argument: 0 serial, 1 parallel; second: sample size
BENCHMARK(BM_BayesTallyTable)->ArgsProduct({{0, 1}, {50, 500}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EchrbGrid)->ArgsProduct({{0, 1}, {10, 100}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZivZakai)->ArgsProduct({{0, 1}, {10, 100}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
