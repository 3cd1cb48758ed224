// Serial reference vs OpenMP kernels: limit-law tabulation and path simulation.
// The conditional-law estimator works in batches of 1024 paths per worker, so for
// small targets the parallel run simulates more paths than the serial one.
#include <benchmark/benchmark.h>

#include "gtsc/limit_laws.hpp"
#include "gtsc/simulator.hpp"

namespace {

const gtsc::GtscParams kCramer{1.0, 0.5, 1.0, 0.10, 0.5};

const gtsc::LadderModel& ladder() {
  static const gtsc::LadderModel m = gtsc::gtsc_ladder(kCramer, gtsc::classify(kCramer));
  return m;
}

const std::vector<double>& grid() {
  static const std::vector<double> g = gtsc::linear_grid(0.0, 20.0, 41);
  return g;
}

void BM_TabulateGenericSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gtsc::tabulate_serial(ladder(), gtsc::Law::MaxUndershoot, grid()));
  }
}

void BM_TabulateGenericParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gtsc::tabulate(ladder(), gtsc::Law::MaxUndershoot, grid()));
  }
}

gtsc::SimScheme scheme() {
  gtsc::SimScheme s;
  s.barrier = 40.0;
  s.horizon = 2000.0;
  s.seed = 17;
  return s;
}

void BM_EstimateSerial(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gtsc::estimate_conditional_laws_serial(kCramer, 5.0, n, scheme(), grid()));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_EstimateParallel(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gtsc::estimate_conditional_laws(kCramer, 5.0, n, scheme(), grid()));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

// Fixed path count, so serial and parallel do identical work.
void BM_MeanPositionSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gtsc::estimate_mean_position_serial(kCramer, 1.0, state.range(0), scheme()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MeanPositionParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gtsc::estimate_mean_position(kCramer, 1.0, state.range(0), scheme()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TabulateGenericSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TabulateGenericParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateSerial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateParallel)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK(BM_MeanPositionSerial)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeanPositionParallel)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
