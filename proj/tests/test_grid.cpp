#include <doctest.h>

#include <random>
#include <sstream>

#include "olab/grid.hpp"

using namespace olab;

namespace {

GridFunction random_function(const DyadicGrid& grid, std::uint64_t seed,
                             double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, amp);
  std::vector<double> vals(grid.cell_count());
  for (double& v : vals) v = unif(rng);
  return GridFunction(grid, std::move(vals));
}

}  // namespace

TEST_CASE("grid geometry basics") {
  const DyadicGrid g1(1, 4);
  CHECK(g1.cell_count() == 16);
  CHECK(g1.cell_measure() == 1.0 / 16);

  const DyadicGrid g2(2, 3);
  CHECK(g2.cell_count() == 64);
  CHECK(g2.measure(DyadicCube{2, {1, 3}}) == 1.0 / 16);

  CHECK_THROWS_AS(DyadicGrid(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(DyadicGrid(1, -1), std::invalid_argument);
}

TEST_CASE("children partition their parent and nesting is dyadic") {
  const DyadicGrid grid(2, 4);
  const DyadicCube q{1, {1, 0}};
  const auto kids = grid.children(q);
  CHECK(kids.size() == 4);
  for (const auto& c : kids) {
    CHECK(grid.contains(q, c));
    CHECK(c.level == 2);
  }
  // any two dyadic cubes: disjoint or nested
  const DyadicCube a{2, {2, 1}}, b{3, {5, 2}};
  const bool nested = grid.contains(a, b) || grid.contains(b, a);
  const bool disjoint = !grid.contains(a, b) && !grid.contains(b, a);
  CHECK((nested || disjoint));
}

TEST_CASE("descendants and parent examples") {
  const DyadicGrid grid(1, 3);
  const auto d = grid.descendants(grid.root(), 1);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == DyadicCube{1, {0, 0}});
  CHECK(d[1] == DyadicCube{1, {1, 0}});

  CHECK(grid.parent(DyadicCube{1, {0, 0}}) == grid.root());
  CHECK_THROWS_AS(grid.parent(grid.root()), std::domain_error);

  const DyadicGrid grid2(2, 4);
  // |descendants(Q, j+2)| = 4^n
  const DyadicCube q{1, {0, 1}};
  CHECK(grid2.descendants(q, 3).size() == 16);
}

TEST_CASE("integrate examples") {
  const DyadicGrid grid(1, 4);
  const GridFunction one = GridFunction::constant(grid, 1.0);
  CHECK(integrate(one, grid.root()) == doctest::Approx(1.0).epsilon(1e-15));

  // indicator of [0, 1/2)
  std::vector<double> vals(grid.cell_count(), 0.0);
  for (std::size_t i = 0; i < 8; ++i) vals[i] = 1.0;
  const GridFunction ind(grid, vals);
  CHECK(integrate(ind, grid.root()) == doctest::Approx(0.5).epsilon(1e-15));

  // random vs direct cell-sum oracle
  const GridFunction f = random_function(grid, 99);
  double oracle = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) oracle += f[i] * grid.cell_measure();
  CHECK(integrate(f, grid.root()) == doctest::Approx(oracle).epsilon(1e-15));

  CHECK_THROWS_AS(integrate(f, DyadicCube{9, {0, 0}}), std::domain_error);
  CHECK_THROWS_AS(integrate(f, DyadicCube{2, {4, 0}}), std::domain_error);
}

TEST_CASE("average examples") {
  const DyadicGrid grid(1, 3);
  const GridFunction c = GridFunction::constant(grid, 3.25);
  CHECK(average(c, DyadicCube{2, {1, 0}}) == doctest::Approx(3.25));

  std::vector<double> vals(grid.cell_count(), 0.0);
  for (std::size_t i = 0; i < 4; ++i) vals[i] = 1.0;
  const GridFunction ind(grid, vals);
  CHECK(average(ind, DyadicCube{1, {0, 0}}) == doctest::Approx(1.0));
  CHECK(average(ind, grid.root()) == doctest::Approx(0.5));
}

TEST_CASE("weighted_measure examples") {
  const DyadicGrid grid(1, 3);
  std::vector<double> w(grid.cell_count());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = i < 4 ? 1.0 : 2.0;
  const GridFunction step(grid, w);

  std::vector<std::uint8_t> none(grid.cell_count(), 0);
  CHECK(weighted_measure(step, none) == 0.0);

  std::vector<std::uint8_t> all(grid.cell_count(), 1);
  const GridFunction one = GridFunction::constant(grid, 1.0);
  CHECK(weighted_measure(one, all) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<std::uint8_t> left(grid.cell_count(), 0);
  for (std::size_t i = 0; i < 4; ++i) left[i] = 1;
  CHECK(weighted_measure(step, left) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("additivity is exact over children") {
  for (int n : {1, 2}) {
    const DyadicGrid grid(n, 3);
    const GridFunction f = random_function(grid, 1234 + n);
    for (int j = 0; j < 3; ++j) {
      for (std::size_t i = 0; i < grid.level_cube_count(j); ++i) {
        const DyadicCube q = grid.cube_at(j, i);
        double kids = 0.0;
        for (const DyadicCube& c : grid.children(q)) kids += integrate(f, c);
        CHECK(integrate(f, q) == kids);  // bitwise: same fold order
      }
    }
  }
}

TEST_CASE("cube sums match integrate bitwise") {
  for (int n : {1, 2}) {
    const DyadicGrid grid(n, 4);
    const GridFunction f = random_function(grid, 77 + n);
    const CubeSums sums = CubeSums::integrals(f);
    for (int j = 0; j <= grid.max_level(); ++j)
      for (std::size_t i = 0; i < grid.level_cube_count(j); ++i) {
        const DyadicCube q = grid.cube_at(j, i);
        CHECK(sums.sum(q) == integrate(f, q));
      }
  }
}

TEST_CASE("monotonicity and scaling") {
  const DyadicGrid grid(1, 5);
  const GridFunction f = random_function(grid, 5);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::uint8_t> e1(grid.cell_count()), e2(grid.cell_count());
  for (std::size_t i = 0; i < e1.size(); ++i) {
    e2[i] = unif(rng) < 0.5 ? 1 : 0;
    e1[i] = e2[i] && unif(rng) < 0.5 ? 1 : 0;
  }
  CHECK(weighted_measure(f, e1) <= weighted_measure(f, e2));

  const GridFunction g = pointwise_scale(f, 3.5);
  CHECK(integrate(g, grid.root()) ==
        doctest::Approx(3.5 * integrate(f, grid.root())).epsilon(1e-14));
}

TEST_CASE("grid function validation") {
  const DyadicGrid grid(1, 2);
  CHECK_THROWS_AS(GridFunction(grid, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(grid, {1.0, -2.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      GridFunction(grid, {1.0, std::numeric_limits<double>::infinity(), 0.0, 1.0}),
      std::invalid_argument);
}

TEST_CASE("csv round trip preserves values and order") {
  const DyadicGrid grid(2, 3);
  const GridFunction f = random_function(grid, 31);
  std::stringstream ss;
  write_csv(f, ss);
  const GridFunction g = read_csv(grid, ss);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == g[i]);

  // documented order: axis-0 major
  std::stringstream ss2;
  write_csv(f, ss2);
  std::string header;
  std::getline(ss2, header);
  CHECK(header == "cell_index,value");
}
