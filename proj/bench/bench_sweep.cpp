// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "josephson/sweep.hpp"
#include "josephson/tongue.hpp"

using namespace josephson;

namespace {

const Range kA = Range::parse("-2:2:0.25");
const Range kS = Range::parse("0:6:1");

void BM_GridSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rotation_grid_serial(1.0, kA, kS));
}

void BM_GridParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(rotation_grid(1.0, kA, kS, {}, Execution::kParallel));
  }
}

void BM_LiftSample(benchmark::State& state) {
  const auto exec = state.range(1) ? Execution::kParallel : Execution::kSerial;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        LiftMap::sample({1.0, 1.3, 5.0}, n, torus_integrator_config(), 0.0, exec));
  }
}

void BM_WidthScan(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::kParallel : Execution::kSerial;
  std::vector<double> grid;
  for (double s = 0.5; s <= 10.0; s += 0.5) grid.push_back(s);
  for (auto _ : state) benchmark::DoNotOptimize(width_function(1, 1.0, grid, 0, 1e-8, exec));
}

}  // namespace

BENCHMARK(BM_GridSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LiftSample)->Args({256, 0})->Args({256, 1})->Args({1024, 0})->Args({1024, 1})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WidthScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
