#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "jch/oracle.hpp"
#include "jch/parallel.hpp"
#include "jch/sector_hamiltonian.hpp"
#include "jch/secular.hpp"

namespace {

jch::Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? jch::Execution::serial : jch::Execution::parallel;
}

void BM_SectorSweep(benchmark::State& state) {
  std::vector<jch::ModelParams> grid;
  for (double g : {1.0, 2.0, 4.0}) grid.push_back(jch::validate_params({50, 0.0, 1.0, g}));
  std::vector<jch::SectorIndex> sectors;
  for (int p = 0; p < 50; p += 5) sectors.push_back(jch::SectorIndex{p});
  for (auto _ : state) benchmark::DoNotOptimize(jch::sector_sweep(grid, sectors, {}, mode(state)));
}

void BM_ContinuumBands(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(jch::continuum_bands(0.0, 1.0, 2.0, 1.3, 1 << 16, mode(state)));
}

void BM_CriticalCurve(benchmark::State& state) {
  std::vector<double> angles;
  for (int i = 0; i < 16; ++i) angles.push_back(2.0 * std::numbers::pi * i / 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jch::critical_coupling_curve(angles, 0.0, jch::kDefaultBandResolution,
                                                          jch::kCriticalTolerance, mode(state)));
  }
}

void BM_SectorProjection(benchmark::State& state) {
  const auto params = jch::validate_params({10, 0.0, 1.0, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(jch::sector_project_spectrum(params, false, mode(state)));
}

}  // namespace

// Argument 0 runs the serial reference, 1 the OpenMP path.
BENCHMARK(BM_SectorSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContinuumBands)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CriticalCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SectorProjection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
