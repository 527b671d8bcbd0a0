#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace olab {

/// Dyadic cube of [0,1)^n: a level j and one integer coordinate per axis.
/// Side length is 2^-j and each coordinate lies in [0, 2^j).
struct DyadicCube {
  int level = 0;
  std::array<std::uint32_t, 2> coord{0, 0};

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

std::string to_string(const DyadicCube& q);

/// Finite dyadic hierarchy over [0,1)^n down to cell resolution 2^-L.
/// Only n in {1,2}; cell count is 2^{nL}.
class DyadicGrid {
 public:
  DyadicGrid(int dimension, int max_level);

  int dimension() const { return dimension_; }
  int max_level() const { return max_level_; }
  std::size_t cell_count() const { return cell_count_; }

  DyadicCube root() const { return DyadicCube{}; }
  double side_length(const DyadicCube& q) const;
  /// |Q| = 2^{-level*n}.
  double measure(const DyadicCube& q) const;
  double cell_measure() const { return cell_measure_; }

  /// Number of cubes at a given level: 2^{n*level}.
  std::size_t level_cube_count(int level) const;
  /// Linear index of a cube within its level (axis-0 major).
  std::size_t cube_linear_index(const DyadicCube& q) const;
  DyadicCube cube_at(int level, std::size_t linear) const;

  /// Cell index of the level-L cube, lexicographic by axis coordinate
  /// (axis 0 major). This is the documented CSV row order.
  std::size_t cell_index(const DyadicCube& leaf) const;
  DyadicCube cell_cube(std::size_t index) const;

  bool valid(const DyadicCube& q) const;
  /// Throws std::domain_error for cubes outside the grid or below cell level.
  void require_valid(const DyadicCube& q) const;

  /// True when inner is contained in outer (dyadic: equal or nested).
  bool contains(const DyadicCube& outer, const DyadicCube& inner) const;

  DyadicCube parent(const DyadicCube& q) const;  // level 0 -> domain error
  DyadicCube ancestor_at(const DyadicCube& q, int level) const;
  std::vector<DyadicCube> children(const DyadicCube& q) const;
  /// All level-j dyadic subcubes of q, j >= q.level.
  std::vector<DyadicCube> descendants(const DyadicCube& q, int level) const;

  std::size_t cube_cell_count(const DyadicCube& q) const;

  /// Visit the cell indices covered by q, ascending.
  template <typename Fn>
  void for_each_cell(const DyadicCube& q, Fn&& fn) const {
    const int shift = max_level_ - q.level;
    if (dimension_ == 1) {
      const std::size_t lo = static_cast<std::size_t>(q.coord[0]) << shift;
      const std::size_t hi = static_cast<std::size_t>(q.coord[0] + 1) << shift;
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    } else {
      const std::size_t row = static_cast<std::size_t>(1) << max_level_;
      const std::size_t x0 = static_cast<std::size_t>(q.coord[0]) << shift;
      const std::size_t x1 = static_cast<std::size_t>(q.coord[0] + 1) << shift;
      const std::size_t y0 = static_cast<std::size_t>(q.coord[1]) << shift;
      const std::size_t y1 = static_cast<std::size_t>(q.coord[1] + 1) << shift;
      for (std::size_t x = x0; x < x1; ++x)
        for (std::size_t y = y0; y < y1; ++y) fn(x * row + y);
    }
  }

  friend bool operator==(const DyadicGrid&, const DyadicGrid&) = default;

 private:
  int dimension_ = 1;
  int max_level_ = 0;
  std::size_t cell_count_ = 1;
  double cell_measure_ = 1.0;
};

/// Nonnegative piecewise-constant function on the finest-level cells.
/// The stored value is the cell average of the represented function.
class GridFunction {
 public:
  GridFunction(DyadicGrid grid, std::vector<double> values);
  static GridFunction constant(const DyadicGrid& grid, double c);

  const DyadicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t cell) const { return values_[cell]; }
  std::span<const double> values() const { return values_; }

 private:
  DyadicGrid grid_;
  std::vector<double> values_;
};

/// Pointwise algebra; results are validated (>= 0, finite).
GridFunction pointwise_product(const GridFunction& a, const GridFunction& b);
GridFunction pointwise_quotient(const GridFunction& a, const GridFunction& b);
GridFunction pointwise_pow(const GridFunction& a, double exponent);
GridFunction pointwise_scale(const GridFunction& a, double c);
GridFunction pointwise_max(const GridFunction& a, const GridFunction& b);
GridFunction pointwise_apply(const GridFunction& a,
                             const std::function<double(double)>& fn);

/// Exact integral of F over Q: sum of F(c)|c| over cells c in Q, accumulated
/// in fixed tree order so that integrate(F,Q) == sum over children exactly.
double integrate(const GridFunction& f, const DyadicCube& q);
double average(const GridFunction& f, const DyadicCube& q);

/// w(E) = sum over flagged cells of F(c)|c|. Mask length must equal the cell
/// count; nonzero mask bytes select cells.
double weighted_measure(const GridFunction& f,
                        const std::vector<std::uint8_t>& mask);

/// Per-level tree sums of cell terms, built bottom-up with the same fold
/// order as integrate(); lookups are O(1) per cube.
class CubeSums {
 public:
  CubeSums(const DyadicGrid& grid, std::span<const double> cell_terms);
  static CubeSums integrals(const GridFunction& f);

  double sum(const DyadicCube& q) const;
  /// sum / |Q| (meaningful when the terms are value * cell measure).
  double average(const DyadicCube& q) const;

  const DyadicGrid& grid() const { return grid_; }

 private:
  DyadicGrid grid_;
  std::vector<std::vector<double>> level_sums_;
};

/// Per-level minima of cell values (ess-inf over cubes, exact for
/// piecewise-constant data).
class CubeMins {
 public:
  CubeMins(const DyadicGrid& grid, std::span<const double> cell_values);
  double min(const DyadicCube& q) const;

 private:
  DyadicGrid grid_;
  std::vector<std::vector<double>> level_mins_;
};

/// CSV serialization: header "cell_index,value", one row per cell in the
/// documented index order, full double precision.
void write_csv(const GridFunction& f, std::ostream& os);
GridFunction read_csv(const DyadicGrid& grid, std::istream& is);
void write_csv_file(const GridFunction& f, const std::string& path);
GridFunction read_csv_file(const DyadicGrid& grid, const std::string& path);

}  // namespace olab
