#include <benchmark/benchmark.h>

#include "metaestim/dynamics.hpp"
#include "metaestim/extremize.hpp"
#include "metaestim/sampling.hpp"
#include "metaestim/test_functions.hpp"

using namespace metaestim;

static void BM_TestFunction(benchmark::State& state) {
  const BenchmarkFunction f{static_cast<TestFunction>(state.range(0)), 4};
  const std::vector<double> x{0.3, -1.2, 4.5, 2.0};
  state.SetLabel(f.name());
  for (auto _ : state) benchmark::DoNotOptimize(f(x));
}
BENCHMARK(BM_TestFunction)->DenseRange(0, 4);

static void BM_Lhs(benchmark::State& state) {
  const ParameterSpace space = BenchmarkFunction{TestFunction::cigar, 4}.default_space();
  Rng rng(kDefaultSeed);
  for (auto _ : state) benchmark::DoNotOptimize(lhs(space, static_cast<std::size_t>(state.range(0)), rng));
}
BENCHMARK(BM_Lhs)->Arg(20)->Arg(1000);

static void BM_Dtw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::sin(0.1 * static_cast<double>(i));
    b[i] = std::cos(0.13 * static_cast<double>(i));
  }
  for (auto _ : state) benchmark::DoNotOptimize(dtw_distance(a, b));
}
BENCHMARK(BM_Dtw)->Arg(100)->Arg(1000);

static void BM_PredatorPrey(benchmark::State& state) {
  const PredatorPreyParams p{0.3297914, 0.4675479, 1.650108, 0.778639};
  const PredatorPreySetup setup = default_period_setup(72);
  for (auto _ : state) benchmark::DoNotOptimize(period_tuning_cost(p, 72, setup));
}
BENCHMARK(BM_PredatorPrey);

static void BM_Extremize(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  state.SetLabel(to_string(method));
  for (auto _ : state) {
    Objective obj = make_benchmark_objective({TestFunction::cigar, 4}, 0.1);
    benchmark::DoNotOptimize(extremize(method, obj).stats.total_evals);
  }
}
BENCHMARK(BM_Extremize)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
