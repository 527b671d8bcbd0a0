#include "olab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace olab {

std::string to_string(const DyadicCube& q) {
  std::string s = "Q(j=" + std::to_string(q.level) + ",x=" + std::to_string(q.coord[0]);
  s += ",y=" + std::to_string(q.coord[1]) + ")";
  return s;
}

DyadicGrid::DyadicGrid(int dimension, int max_level)
    : dimension_(dimension), max_level_(max_level) {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("DyadicGrid: dimension must be 1 or 2");
  if (max_level < 0 || dimension * max_level > 26)
    throw std::invalid_argument("DyadicGrid: max_level out of range");
  cell_count_ = static_cast<std::size_t>(1) << (dimension_ * max_level_);
  cell_measure_ = std::ldexp(1.0, -dimension_ * max_level_);
}

double DyadicGrid::side_length(const DyadicCube& q) const {
  return std::ldexp(1.0, -q.level);
}

double DyadicGrid::measure(const DyadicCube& q) const {
  return std::ldexp(1.0, -q.level * dimension_);
}

std::size_t DyadicGrid::level_cube_count(int level) const {
  return static_cast<std::size_t>(1) << (dimension_ * level);
}

std::size_t DyadicGrid::cube_linear_index(const DyadicCube& q) const {
  if (dimension_ == 1) return q.coord[0];
  return (static_cast<std::size_t>(q.coord[0]) << q.level) + q.coord[1];
}

DyadicCube DyadicGrid::cube_at(int level, std::size_t linear) const {
  DyadicCube q;
  q.level = level;
  if (dimension_ == 1) {
    q.coord[0] = static_cast<std::uint32_t>(linear);
  } else {
    q.coord[0] = static_cast<std::uint32_t>(linear >> level);
    q.coord[1] = static_cast<std::uint32_t>(linear & ((std::size_t(1) << level) - 1));
  }
  return q;
}

std::size_t DyadicGrid::cell_index(const DyadicCube& leaf) const {
  return cube_linear_index(leaf);
}

DyadicCube DyadicGrid::cell_cube(std::size_t index) const {
  return cube_at(max_level_, index);
}

bool DyadicGrid::valid(const DyadicCube& q) const {
  if (q.level < 0 || q.level > max_level_) return false;
  const std::uint32_t limit = static_cast<std::uint32_t>(1) << q.level;
  for (int i = 0; i < dimension_; ++i)
    if (q.coord[i] >= limit) return false;
  for (int i = dimension_; i < 2; ++i)
    if (q.coord[i] != 0) return false;
  return true;
}

void DyadicGrid::require_valid(const DyadicCube& q) const {
  if (!valid(q))
    throw std::domain_error("cube outside grid domain or level out of range: " +
                            to_string(q));
}

bool DyadicGrid::contains(const DyadicCube& outer, const DyadicCube& inner) const {
  if (outer.level > inner.level) return false;
  const int shift = inner.level - outer.level;
  for (int i = 0; i < dimension_; ++i)
    if ((inner.coord[i] >> shift) != outer.coord[i]) return false;
  return true;
}

DyadicCube DyadicGrid::parent(const DyadicCube& q) const {
  require_valid(q);
  if (q.level == 0) throw std::domain_error("parent of level-0 cube");
  DyadicCube p;
  p.level = q.level - 1;
  for (int i = 0; i < dimension_; ++i) p.coord[i] = q.coord[i] >> 1;
  return p;
}

DyadicCube DyadicGrid::ancestor_at(const DyadicCube& q, int level) const {
  require_valid(q);
  if (level < 0 || level > q.level)
    throw std::domain_error("ancestor level out of range");
  DyadicCube p;
  p.level = level;
  const int shift = q.level - level;
  for (int i = 0; i < dimension_; ++i) p.coord[i] = q.coord[i] >> shift;
  return p;
}

std::vector<DyadicCube> DyadicGrid::children(const DyadicCube& q) const {
  require_valid(q);
  if (q.level >= max_level_)
    throw std::domain_error("children below cell level");
  std::vector<DyadicCube> out;
  out.reserve(std::size_t(1) << dimension_);
  if (dimension_ == 1) {
    for (std::uint32_t dx = 0; dx < 2; ++dx)
      out.push_back(DyadicCube{q.level + 1, {2 * q.coord[0] + dx, 0}});
  } else {
    for (std::uint32_t dx = 0; dx < 2; ++dx)
      for (std::uint32_t dy = 0; dy < 2; ++dy)
        out.push_back(DyadicCube{q.level + 1, {2 * q.coord[0] + dx, 2 * q.coord[1] + dy}});
  }
  return out;
}

std::vector<DyadicCube> DyadicGrid::descendants(const DyadicCube& q, int level) const {
  require_valid(q);
  if (level < q.level || level > max_level_)
    throw std::domain_error("descendant level out of range");
  const int shift = level - q.level;
  std::vector<DyadicCube> out;
  if (dimension_ == 1) {
    const std::uint32_t lo = q.coord[0] << shift;
    const std::uint32_t hi = (q.coord[0] + 1) << shift;
    for (std::uint32_t x = lo; x < hi; ++x) out.push_back(DyadicCube{level, {x, 0}});
  } else {
    const std::uint32_t x0 = q.coord[0] << shift, x1 = (q.coord[0] + 1) << shift;
    const std::uint32_t y0 = q.coord[1] << shift, y1 = (q.coord[1] + 1) << shift;
    for (std::uint32_t x = x0; x < x1; ++x)
      for (std::uint32_t y = y0; y < y1; ++y) out.push_back(DyadicCube{level, {x, y}});
  }
  return out;
}

std::size_t DyadicGrid::cube_cell_count(const DyadicCube& q) const {
  return static_cast<std::size_t>(1) << (dimension_ * (max_level_ - q.level));
}

GridFunction::GridFunction(DyadicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count())
    throw std::invalid_argument("GridFunction: value count != cell count");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("GridFunction: values must be finite and >= 0");
  }
}

GridFunction GridFunction::constant(const DyadicGrid& grid, double c) {
  return GridFunction(grid, std::vector<double>(grid.cell_count(), c));
}

namespace {

GridFunction map_cells(const GridFunction& a, const GridFunction& b,
                       double (*op)(double, double)) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("grid mismatch in pointwise operation");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return GridFunction(a.grid(), std::move(out));
}

}  // namespace

GridFunction pointwise_product(const GridFunction& a, const GridFunction& b) {
  return map_cells(a, b, [](double x, double y) { return x * y; });
}

GridFunction pointwise_quotient(const GridFunction& a, const GridFunction& b) {
  return map_cells(a, b, [](double x, double y) { return x / y; });
}

GridFunction pointwise_pow(const GridFunction& a, double exponent) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::pow(a[i], exponent);
  return GridFunction(a.grid(), std::move(out));
}

GridFunction pointwise_scale(const GridFunction& a, double c) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return GridFunction(a.grid(), std::move(out));
}

GridFunction pointwise_max(const GridFunction& a, const GridFunction& b) {
  return map_cells(a, b, [](double x, double y) { return x > y ? x : y; });
}

GridFunction pointwise_apply(const GridFunction& a,
                             const std::function<double(double)>& fn) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i]);
  return GridFunction(a.grid(), std::move(out));
}

namespace {

double tree_sum(const DyadicGrid& g, std::span<const double> terms,
                const DyadicCube& q) {
  if (q.level == g.max_level()) return terms[g.cell_index(q)];
  double acc = 0.0;
  DyadicCube child;
  child.level = q.level + 1;
  if (g.dimension() == 1) {
    for (std::uint32_t dx = 0; dx < 2; ++dx) {
      child.coord[0] = 2 * q.coord[0] + dx;
      acc += tree_sum(g, terms, child);
    }
  } else {
    for (std::uint32_t dx = 0; dx < 2; ++dx)
      for (std::uint32_t dy = 0; dy < 2; ++dy) {
        child.coord[0] = 2 * q.coord[0] + dx;
        child.coord[1] = 2 * q.coord[1] + dy;
        acc += tree_sum(g, terms, child);
      }
  }
  return acc;
}

}  // namespace

double integrate(const GridFunction& f, const DyadicCube& q) {
  const DyadicGrid& g = f.grid();
  g.require_valid(q);
  std::vector<double> terms(f.size());
  const double m = g.cell_measure();
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f[i] * m;
  return tree_sum(g, terms, q);
}

double average(const GridFunction& f, const DyadicCube& q) {
  return integrate(f, q) / f.grid().measure(q);
}

double weighted_measure(const GridFunction& f,
                        const std::vector<std::uint8_t>& mask) {
  if (mask.size() != f.size())
    throw std::invalid_argument("weighted_measure: mask size mismatch");
  const double m = f.grid().cell_measure();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (mask[i]) acc += f[i] * m;
  return acc;
}

CubeSums::CubeSums(const DyadicGrid& grid, std::span<const double> cell_terms)
    : grid_(grid) {
  if (cell_terms.size() != grid.cell_count())
    throw std::invalid_argument("CubeSums: term count mismatch");
  const int L = grid.max_level();
  level_sums_.resize(L + 1);
  level_sums_[L].assign(cell_terms.begin(), cell_terms.end());
  for (int j = L - 1; j >= 0; --j) {
    const std::size_t count = grid.level_cube_count(j);
    level_sums_[j].resize(count);
    const auto& below = level_sums_[j + 1];
    if (grid.dimension() == 1) {
      for (std::size_t i = 0; i < count; ++i) {
        double acc = 0.0;
        acc += below[2 * i];
        acc += below[2 * i + 1];
        level_sums_[j][i] = acc;
      }
    } else {
      const std::size_t row = std::size_t(1) << (j + 1);
      for (std::size_t x = 0; x < (std::size_t(1) << j); ++x)
        for (std::size_t y = 0; y < (std::size_t(1) << j); ++y) {
          double acc = 0.0;
          for (std::size_t dx = 0; dx < 2; ++dx)
            for (std::size_t dy = 0; dy < 2; ++dy)
              acc += below[(2 * x + dx) * row + (2 * y + dy)];
          level_sums_[j][(x << j) + y] = acc;
        }
    }
  }
}

CubeSums CubeSums::integrals(const GridFunction& f) {
  std::vector<double> terms(f.size());
  const double m = f.grid().cell_measure();
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f[i] * m;
  return CubeSums(f.grid(), terms);
}

double CubeSums::sum(const DyadicCube& q) const {
  grid_.require_valid(q);
  return level_sums_[q.level][grid_.cube_linear_index(q)];
}

double CubeSums::average(const DyadicCube& q) const {
  return sum(q) / grid_.measure(q);
}

CubeMins::CubeMins(const DyadicGrid& grid, std::span<const double> cell_values)
    : grid_(grid) {
  if (cell_values.size() != grid.cell_count())
    throw std::invalid_argument("CubeMins: value count mismatch");
  const int L = grid.max_level();
  level_mins_.resize(L + 1);
  level_mins_[L].assign(cell_values.begin(), cell_values.end());
  for (int j = L - 1; j >= 0; --j) {
    const std::size_t count = grid.level_cube_count(j);
    level_mins_[j].resize(count);
    const auto& below = level_mins_[j + 1];
    if (grid.dimension() == 1) {
      for (std::size_t i = 0; i < count; ++i)
        level_mins_[j][i] = std::min(below[2 * i], below[2 * i + 1]);
    } else {
      const std::size_t row = std::size_t(1) << (j + 1);
      for (std::size_t x = 0; x < (std::size_t(1) << j); ++x)
        for (std::size_t y = 0; y < (std::size_t(1) << j); ++y) {
          double m = below[(2 * x) * row + 2 * y];
          m = std::min(m, below[(2 * x) * row + 2 * y + 1]);
          m = std::min(m, below[(2 * x + 1) * row + 2 * y]);
          m = std::min(m, below[(2 * x + 1) * row + 2 * y + 1]);
          level_mins_[j][(x << j) + y] = m;
        }
    }
  }
}

double CubeMins::min(const DyadicCube& q) const {
  grid_.require_valid(q);
  return level_mins_[q.level][grid_.cube_linear_index(q)];
}

void write_csv(const GridFunction& f, std::ostream& os) {
  os << "cell_index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, f[i]);
    os << buf;
  }
}

GridFunction read_csv(const DyadicGrid& grid, std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("grid CSV: empty stream");
  std::vector<double> values(grid.cell_count(),
                             std::numeric_limits<double>::quiet_NaN());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("grid CSV: malformed row: " + line);
    const std::size_t idx = std::stoull(line.substr(0, comma));
    if (idx >= values.size())
      throw std::runtime_error("grid CSV: cell index out of range");
    values[idx] = std::stod(line.substr(comma + 1));
  }
  for (double v : values)
    if (std::isnan(v)) throw std::runtime_error("grid CSV: missing cells");
  return GridFunction(grid, std::move(values));
}

void write_csv_file(const GridFunction& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  write_csv(f, os);
}

GridFunction read_csv_file(const DyadicGrid& grid, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for read: " + path);
  return read_csv(grid, is);
}

}  // namespace olab
