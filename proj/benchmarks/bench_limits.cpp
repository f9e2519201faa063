#include <benchmark/benchmark.h>

#include "maxwin/limit_engine.hpp"

namespace {

void BM_TwoGroupLimit(benchmark::State& state) {
  double c = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxwin::two_group_limit(c, 1.5).value);
    c = c > 10.0 ? 0.1 : c * 1.3;
  }
}
BENCHMARK(BM_TwoGroupLimit);

void BM_MultiGroupLimits(benchmark::State& state) {
  std::vector<maxwin::LimitGroup> groups;
  for (int k = 0; k < state.range(0); ++k) groups.push_back({maxwin::ExtendedReal::finite(1.0 + k), 1.0 + 0.25 * k});
  const maxwin::LimitSpecK spec(groups, 0);
  for (auto _ : state) benchmark::DoNotOptimize(maxwin::multi_group_limits(spec).probabilities.size());
}
BENCHMARK(BM_MultiGroupLimits)->Arg(2)->Arg(3)->Arg(6);

void BM_FiniteWinner(benchmark::State& state) {
  const double n2 = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maxwin::finite_n_winner({10.0 * n2, 1.0}, {n2, 1.5}).value);
}
BENCHMARK(BM_FiniteWinner)->Arg(100)->Arg(1'000'000);

}  // namespace
