#include <benchmark/benchmark.h>

#include "maxwin/gaussian.hpp"

namespace {

void BM_NormalCdf(benchmark::State& state) {
  double x = -37.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxwin::std_normal_cdf(x));
    x = x > 8.0 ? -37.0 : x + 0.013;
  }
}
BENCHMARK(BM_NormalCdf);

void BM_LogNormalCdf(benchmark::State& state) {
  double x = -200.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxwin::log_std_normal_cdf(x));
    x = x > 8.0 ? -200.0 : x + 0.07;
  }
}
BENCHMARK(BM_LogNormalCdf);

void BM_NormalQuantile(benchmark::State& state) {
  double p = 1e-12;
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxwin::std_normal_quantile(maxwin::UnitProb(p)));
    p = p > 0.98 ? 1e-12 : p * 1.01 + 1e-6;
  }
}
BENCHMARK(BM_NormalQuantile);

void BM_UpperTailQuantile(benchmark::State& state) {
  double lq = -1e4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxwin::upper_tail_quantile(maxwin::TailProb(lq)));
    lq = lq > -1.0 ? -1e4 : lq * 0.99;
  }
}
BENCHMARK(BM_UpperTailQuantile);

}  // namespace
