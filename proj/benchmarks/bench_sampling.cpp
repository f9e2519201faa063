#include <benchmark/benchmark.h>

#include <vector>

#include "maxwin/empirical.hpp"
#include "maxwin/mc_lab.hpp"
#include "maxwin/rng.hpp"

namespace {

void BM_Philox(benchmark::State& state) {
  std::uint32_t ctr = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxwin::Philox4x32::generate({ctr, 0, 0, 0}, {1, 2}));
    ++ctr;
  }
}
BENCHMARK(BM_Philox);

void BM_SubstreamUniform(benchmark::State& state) {
  maxwin::SubstreamRng r(maxwin::RngStream{1, 2}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(r.uniform());
}
BENCHMARK(BM_SubstreamUniform);

void BM_McTwoGroup(benchmark::State& state) {
  const maxwin::RngStream rng{7, 0};
  for (auto _ : state)
    benchmark::DoNotOptimize(maxwin::mc_two_group({4659, 1.0}, {100, 1.5}, state.range(0), rng, 1).successes);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McTwoGroup)->Arg(100'000);

void BM_Bootstrap(benchmark::State& state) {
  std::vector<double> pool1(5000);
  std::vector<double> pool2(5000);
  maxwin::SubstreamRng r(maxwin::RngStream{3, 0}, 0);
  for (auto& x : pool1) x = r.uniform();
  for (auto& x : pool2) x = 1.5 * r.uniform();
  const maxwin::RngStream rng{9, 0};
  const maxwin::BootstrapOptions opts{.threads = 1};
  for (auto _ : state)
    benchmark::DoNotOptimize(maxwin::bootstrap_winner(pool1, pool2, state.range(0), 50, 200, rng, opts).successes);
}
BENCHMARK(BM_Bootstrap)->Arg(50)->Arg(5000);

}  // namespace
