// Fast root-to-leaf maximal sweep vs the naive all-ancestors oracle: the
// memoized table turns O(cells * levels * norm) into one norm per cube.

#include <benchmark/benchmark.h>

#include <random>

#include "olab/grid.hpp"
#include "olab/maximal.hpp"
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

void BM_MaximalFast(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const olab::DyadicGrid grid(1, L);
  const olab::GridFunction f = random_function(grid, 7);
  const olab::YoungFunction phi = olab::make_canonical(1.0, 1.0);
  for (auto _ : state) {
    const olab::MaximalResult res = olab::m_phi_dyadic(f, phi);
    benchmark::DoNotOptimize(res.output[0]);
  }
}
BENCHMARK(BM_MaximalFast)->Arg(6)->Arg(8)->Arg(10);

void BM_MaximalNaive(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const olab::DyadicGrid grid(1, L);
  const olab::GridFunction f = random_function(grid, 7);
  const olab::YoungFunction phi = olab::make_canonical(1.0, 1.0);
  for (auto _ : state) {
    std::vector<double> out(grid.cell_count());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      const olab::DyadicCube leaf = grid.cell_cube(c);
      double best = 0.0;
      for (int j = 0; j <= L; ++j)
        best = std::max(best,
                        olab::cube_norm(f, grid.ancestor_at(leaf, j), phi));
      out[c] = best;
    }
    benchmark::DoNotOptimize(out[0]);
  }
}
BENCHMARK(BM_MaximalNaive)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
