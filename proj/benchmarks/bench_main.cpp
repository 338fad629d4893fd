#include <benchmark/benchmark.h>

#include "srfbm/energy.hpp"
#include "srfbm/fbm.hpp"
#include "srfbm/rng.hpp"
#include "srfbm/sampler.hpp"

using namespace srfbm;

namespace {

Path bench_path(int steps, int dim) {
  return sample_fbm(HurstModel::make(0.5, dim), TimeGrid(0.25 * steps, steps), 1);
}

void BM_EnergyNaive(benchmark::State& state) {
  const Path p = bench_path(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(energy_naive(p).value);
  state.SetComplexityN(state.range(0));
}

void BM_EnergyFast(benchmark::State& state) {
  const Path p = bench_path(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(energy_fast(p).value);
  state.SetComplexityN(state.range(0));
}

void noise_to_path_bench(benchmark::State& state, Backend backend) {
  const int n = static_cast<int>(state.range(0));
  GeneratorOptions opts;
  opts.backend = backend;
  const auto model = HurstModel::make(0.7, 1);
  const TimeGrid grid(1.0, n);
  Engine engine = make_engine(3);
  const NoiseVector xi = draw_noise(model, grid, engine, opts);
  for (auto _ : state) benchmark::DoNotOptimize(noise_to_path(xi, model, grid, opts).values().data());
  state.SetComplexityN(n);
}

void BM_NoiseToPathCholesky(benchmark::State& state) { noise_to_path_bench(state, Backend::cholesky); }
void BM_NoiseToPathCirculant(benchmark::State& state) { noise_to_path_bench(state, Backend::circulant); }

void BM_PcnStep(benchmark::State& state) {
  ChainConfig c;
  c.model = ModelParams::with_step(1, 0.5, 1.0, 0.25 * static_cast<double>(state.range(0)), 0.25);
  Engine engine = make_engine(4);
  ChainState s = initial_state(c, engine);
  for (auto _ : state) benchmark::DoNotOptimize(pcn_step(s, c, 0.3, engine));
}

}  // namespace

BENCHMARK(BM_EnergyNaive)->ArgsProduct({{128, 512, 2048}, {1, 3}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnergyFast)->ArgsProduct({{128, 512, 2048, 8192}, {1, 3}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_NoiseToPathCholesky)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_NoiseToPathCirculant)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PcnStep)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
