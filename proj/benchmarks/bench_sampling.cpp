#include <sketchfem/alias_table.hpp>
#include <sketchfem/rng.hpp>
#include <sketchfem/sketch.hpp>

#include <benchmark/benchmark.h>

#include <cmath>

namespace sketchfem {
namespace {

Vector skewed_distribution(Index m) {
  Vector q(m);
  for (Index i = 0; i < m; ++i) q[i] = 1.0 / std::pow(static_cast<double>(i + 1), 1.2);
  return q / q.sum();
}

void BM_AliasBuild(benchmark::State& state) {
  const Vector q = skewed_distribution(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(AliasTable(q));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AliasBuild)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);

void BM_AliasDraws(benchmark::State& state) {
  const AliasTable table(skewed_distribution(1 << 18));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(draw_samples(table, static_cast<std::uint64_t>(state.range(0)), ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AliasDraws)->RangeMultiplier(10)->Range(1000, 1000000);

void BM_TabulateSort(benchmark::State& state) {
  const AliasTable table(skewed_distribution(1 << 18));
  const auto draws = draw_samples(table, static_cast<std::uint64_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(tabulate(draws));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TabulateSort)->RangeMultiplier(10)->Range(1000, 1000000);

void BM_TabulateCount(benchmark::State& state) {
  const Index m = 1 << 18;
  const AliasTable table(skewed_distribution(m));
  const auto draws = draw_samples(table, static_cast<std::uint64_t>(state.range(0)), 1);
  std::vector<std::uint32_t> scratch;
  for (auto _ : state) benchmark::DoNotOptimize(tabulate(draws, m, scratch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TabulateCount)->RangeMultiplier(10)->Range(1000, 1000000);

}  // namespace
}  // namespace sketchfem
