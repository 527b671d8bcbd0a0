// Luxemburg norm bisection cost across cube sizes and Young functions.

#include <benchmark/benchmark.h>

#include <random>

#include "olab/grid.hpp"
#include "olab/orlicz.hpp"
#include "olab/young.hpp"

namespace {

olab::GridFunction random_function(const olab::DyadicGrid& grid,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  std::vector<double> vals(grid.cell_count());
  for (double& v : vals) v = unif(rng);
  return olab::GridFunction(grid, std::move(vals));
}

void BM_LuxemburgNorm(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const double delta = static_cast<double>(state.range(1));
  const olab::DyadicGrid grid(1, L);
  const olab::GridFunction f = random_function(grid, 42);
  const olab::YoungFunction phi = olab::make_canonical(1.0, delta);
  for (auto _ : state) {
    const double norm = olab::luxemburg_norm(f, grid.root(), phi);
    benchmark::DoNotOptimize(norm);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(grid.cell_count()));
}
BENCHMARK(BM_LuxemburgNorm)
    ->Args({6, 0})
    ->Args({10, 0})
    ->Args({6, 1})
    ->Args({10, 1});

void BM_InfForm(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const olab::DyadicGrid grid(1, L);
  const olab::GridFunction f = random_function(grid, 43);
  const olab::YoungFunction eta = olab::make_eta_eps(1.0, 0.5);
  std::vector<double> cells;
  olab::gather_cells(f, grid.root(), cells);
  for (auto _ : state) {
    const auto res = olab::inf_form_norm(cells, {}, eta);
    benchmark::DoNotOptimize(res.value);
  }
}
BENCHMARK(BM_InfForm)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
