#include <benchmark/benchmark.h>

#include "darc/dynamics.hpp"
#include "darc/pipeline.hpp"

namespace {

using namespace darc;

void BM_AssembleAndDiagonalize(benchmark::State& state) {
  const int n_levels = static_cast<int>(state.range(0));
  const HamiltonianSpec spec = standard_spec(1.0, 1.0, 0.2, 0.1, true, n_levels);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagonalize(assemble(spec)));
  }
}
BENCHMARK(BM_AssembleAndDiagonalize)->Arg(50)->Arg(100)->Arg(200);

void BM_FullPipeline(benchmark::State& state) {
  const HamiltonianSpec spec = standard_spec(1.0, 1.0, 0.2, 0.1, true, 50);
  const FormFactor ff = FormFactor::power_law(1e-4, 1.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(spec, ff));
  }
}
BENCHMARK(BM_FullPipeline);

void BM_DensityGrid(benchmark::State& state) {
  const PipelineResult run = run_pipeline(standard_spec(1.0, 1.0, 0.2, 0.1, true, 50),
                                          FormFactor::power_law(1e-4, 1.0, 3.0));
  std::vector<double> grid(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = 0.01 + 3.0 * static_cast<double>(i) / static_cast<double>(grid.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_density(run.spectrum, grid));
  }
}
BENCHMARK(BM_DensityGrid)->Arg(2000)->Arg(20000);

void BM_MasterEquationStep(benchmark::State& state) {
  const int n_bands = static_cast<int>(state.range(0));
  const PipelineResult run =
      run_pipeline(standard_spec(1.21, 1.0, 0.28, 0.0, false, 50), FormFactor::flat(5e-3));
  FullDressedState sigma = FullDressedState::band_state(n_bands, (3 * n_bands) / 4);
  for (auto _ : state) {
    sigma = evolve_full(sigma, run.rates, 0.2, 16);
    benchmark::DoNotOptimize(sigma);
  }
}
BENCHMARK(BM_MasterEquationStep)->Arg(30)->Arg(60);

}  // namespace

BENCHMARK_MAIN();
