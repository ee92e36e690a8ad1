#include <benchmark/benchmark.h>

#include <cmath>

#include "nonrad/extsolve.hpp"
#include "nonrad/freewave.hpp"
#include "nonrad/profile.hpp"

using namespace nonrad;

namespace {

RadialProfile bench_profile(double step) {
  return sampled_profile(GridSpec(-64.0, 64.0, step),
                         [](double s) { return std::exp(-s * s / 9.0) * (1.0 + 0.3 * s); });
}

void BM_free_wave_point_eval(benchmark::State& state) {
  const FreeWave w(bench_profile(1.0 / 128));
  double r = 1.0, t = -0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w.u(r, t));
    r = (r < 100.0) ? r + 0.13 : 1.0;
    t = (t < 3.0) ? t + 0.05 : -3.0;
  }
}
BENCHMARK(BM_free_wave_point_eval);

void BM_data_from_profile(benchmark::State& state) {
  const RadialProfile g = bench_profile(1.0 / 128);
  const RadialGrid rg(128.0, 1.0 / 128);
  for (auto _ : state) benchmark::DoNotOptimize(data_from_profile(g, rg));
}
BENCHMARK(BM_data_from_profile);

void BM_l2_tail_sweep(benchmark::State& state) {
  const RadialProfile g = bench_profile(1.0 / 128);
  for (auto _ : state) {
    double acc = 0.0;
    for (double r = 0.5; r < 64.0; r *= 1.3) acc += l2_tail(g, r);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_l2_tail_sweep);

void BM_weighted_distance(benchmark::State& state) {
  const RadialProfile a = bench_profile(1.0 / 128);
  RadialProfile b = a;
  b *= 0.97;
  for (auto _ : state) benchmark::DoNotOptimize(weighted_distance(a, b, 1.0, 7.0 / 6.0));
}
BENCHMARK(BM_weighted_distance);

void BM_solver_step(benchmark::State& state) {
  // one short masked solve; dominated by per-step source accumulation
  SolveConfig cfg;
  cfg.R = 1.0;
  cfg.T = 0.25;
  cfg.dt = 1.0 / 64;
  cfg.step = 1.0 / 128;
  cfg.r_max = 64.0;
  cfg.snapshot_stride_time = 0.25;
  const GridSpec sg = cfg.solver_sgrid();
  const RadialProfile g =
      sampled_profile(sg, [](double s) { return 0.05 * std::exp(-s * s / 4.0); });
  const Nonlinearity F = Nonlinearity::focusing();
  for (auto _ : state) benchmark::DoNotOptimize(solve_exterior_profile(g, F, cfg));
}
BENCHMARK(BM_solver_step)->Unit(benchmark::kMillisecond);

void BM_source_profile(benchmark::State& state) {
  const RadialGrid rg(128.0, 1.0 / 128);
  const GridSpec sg(-136.0, 136.0, 1.0 / 128);
  std::vector<double> f(rg.size());
  for (std::size_t i = 0; i < rg.size(); ++i)
    f[i] = 0.01 * std::exp(-(rg.node(i) - 4.0) * (rg.node(i) - 4.0));
  for (auto _ : state) benchmark::DoNotOptimize(source_profile(f, rg, sg));
}
BENCHMARK(BM_source_profile);

}  // namespace

BENCHMARK_MAIN();
