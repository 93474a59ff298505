// Parallel row-gather assembly against the serial pair-scatter reference.

#include "nehari/nonlocal_form.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_AssembleParallel(benchmark::State& state) {
  const nehari::GridSpec grid{-1.0, 1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(nehari::assemble_form(grid, 0.4));
  state.SetComplexityN(state.range(0));
}

void BM_AssembleSerial(benchmark::State& state) {
  const nehari::GridSpec grid{-1.0, 1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(nehari::assemble_form_serial(grid, 0.4));
  state.SetComplexityN(state.range(0));
}

BENCHMARK(BM_AssembleParallel)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleSerial)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
