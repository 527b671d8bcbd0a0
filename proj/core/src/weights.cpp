#include "olab/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace olab {

double tau_dimensional(int n) { return std::ldexp(1.0, 11 + n); }

namespace {

void require_positive(const GridFunction& w, const char* who) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0))
      throw std::domain_error(std::string(who) + ": weight must be strictly positive");
}

template <typename Fn>
ConstantWitness scan_cubes(const DyadicGrid& grid, Fn&& functional) {
  ConstantWitness best;
  best.value = -1.0;
  for (int j = 0; j <= grid.max_level(); ++j) {
    const std::size_t count = grid.level_cube_count(j);
    for (std::size_t i = 0; i < count; ++i) {
      const DyadicCube q = grid.cube_at(j, i);
      const double v = functional(q);
      if (v > best.value) {
        best.value = v;
        best.cube = q;
      }
    }
  }
  return best;
}

}  // namespace

ConstantWitness a_infty_constant(const GridFunction& w) {
  require_positive(w, "a_infty_constant");
  const DyadicGrid& grid = w.grid();
  const double m = grid.cell_measure();
  std::vector<double> terms(w.size()), log_terms(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    terms[i] = w[i] * m;
    log_terms[i] = std::log(w[i]) * m;
  }
  CubeSums sums(grid, terms);
  CubeSums log_sums(grid, log_terms);
  return scan_cubes(grid, [&](const DyadicCube& q) {
    const double avg = sums.average(q);
    const double avg_log = log_sums.sum(q) / grid.measure(q);
    return avg * std::exp(-avg_log);
  });
}

ConstantWitness a1_constant(const GridFunction& w) {
  require_positive(w, "a1_constant");
  const DyadicGrid& grid = w.grid();
  CubeSums sums = CubeSums::integrals(w);
  CubeMins mins(grid, w.values());
  return scan_cubes(grid, [&](const DyadicCube& q) {
    return sums.average(q) / mins.min(q);
  });
}

ConstantWitness a_q_constant(const GridFunction& w, double q) {
  if (!(q > 1.0)) throw std::invalid_argument("a_q_constant: q must be > 1");
  require_positive(w, "a_q_constant");
  const DyadicGrid& grid = w.grid();
  const double m = grid.cell_measure();
  // 1 - q' = -1/(q-1)
  const double dual_exp = -1.0 / (q - 1.0);
  std::vector<double> terms(w.size()), dual_terms(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    terms[i] = w[i] * m;
    dual_terms[i] = std::pow(w[i], dual_exp) * m;
  }
  CubeSums sums(grid, terms);
  CubeSums dual_sums(grid, dual_terms);
  return scan_cubes(grid, [&](const DyadicCube& qc) {
    return sums.average(qc) * std::pow(dual_sums.average(qc), q - 1.0);
  });
}

ConstantWitness rh_constant(const GridFunction& w, double s) {
  if (!(s > 1.0)) throw std::invalid_argument("rh_constant: s must be > 1");
  require_positive(w, "rh_constant");
  const DyadicGrid& grid = w.grid();
  const double m = grid.cell_measure();
  std::vector<double> terms(w.size()), s_terms(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    terms[i] = w[i] * m;
    s_terms[i] = std::pow(w[i], s) * m;
  }
  CubeSums sums(grid, terms);
  CubeSums s_sums(grid, s_terms);
  return scan_cubes(grid, [&](const DyadicCube& q) {
    return std::pow(s_sums.average(q), 1.0 / s) / sums.average(q);
  });
}

GridFunction make_constant_weight(const DyadicGrid& grid, double value) {
  if (!(value > 0.0))
    throw std::invalid_argument("constant weight: value must be positive");
  return GridFunction::constant(grid, value);
}

GridFunction make_step_weight(const DyadicGrid& grid,
                              const std::vector<double>& values) {
  if (values.empty())
    throw std::invalid_argument("step weight: needs at least one value");
  for (double v : values)
    if (!(v > 0.0)) throw std::invalid_argument("step weight: values must be positive");
  const std::size_t segments = values.size();
  std::vector<double> cells(grid.cell_count());
  const std::size_t per_axis = std::size_t(1) << grid.max_level();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const DyadicCube leaf = grid.cell_cube(i);
    const double x = (leaf.coord[0] + 0.5) / static_cast<double>(per_axis);
    std::size_t seg = static_cast<std::size_t>(x * segments);
    if (seg >= segments) seg = segments - 1;
    cells[i] = values[seg];
  }
  return GridFunction(grid, std::move(cells));
}

namespace {

// Antiderivative of |x - c|^{-alpha}: sign(x-c) |x-c|^{1-alpha}/(1-alpha).
double power_antiderivative(double x, double c, double alpha) {
  const double d = x - c;
  const double a = std::abs(d);
  if (a == 0.0) return 0.0;
  const double v = std::pow(a, 1.0 - alpha) / (1.0 - alpha);
  return d >= 0.0 ? v : -v;
}

}  // namespace

GridFunction make_power_weight(const DyadicGrid& grid, double alpha,
                               std::array<double, 2> center) {
  const int n = grid.dimension();
  if (alpha < 0.0 || alpha >= n)
    throw std::invalid_argument(
        "power weight: alpha must lie in [0, n) for local integrability");
  if (alpha == 0.0) return GridFunction::constant(grid, 1.0);
  std::vector<double> cells(grid.cell_count());
  const double h = std::ldexp(1.0, -grid.max_level());
  if (n == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double a = i * h, b = (i + 1) * h;
      cells[i] = (power_antiderivative(b, center[0], alpha) -
                  power_antiderivative(a, center[0], alpha)) /
                 h;
    }
  } else {
    const std::size_t row = std::size_t(1) << grid.max_level();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double cx = (static_cast<double>(i / row) + 0.5) * h;
      const double cy = (static_cast<double>(i % row) + 0.5) * h;
      const double dist = std::hypot(cx - center[0], cy - center[1]);
      if (dist == 0.0)
        throw std::domain_error("power weight: center coincides with a cell centroid");
      cells[i] = std::pow(dist, -alpha);
    }
  }
  return GridFunction(grid, std::move(cells));
}

GridFunction make_max_power_weight(const DyadicGrid& grid,
                                   std::span<const PowerTerm> terms) {
  if (terms.empty())
    throw std::invalid_argument("max power weight: needs at least one term");
  std::vector<double> cells(grid.cell_count(), 0.0);
  for (const PowerTerm& t : terms) {
    if (!(t.scale > 0.0))
      throw std::invalid_argument("max power weight: scale must be positive");
    GridFunction part = make_power_weight(grid, t.alpha, t.center);
    for (std::size_t i = 0; i < cells.size(); ++i)
      cells[i] = std::max(cells[i], t.scale * part[i]);
  }
  return GridFunction(grid, std::move(cells));
}

double choose_a_q(const GridFunction& w, double cap, ConstantWitness* out) {
  static constexpr double kLadder[] = {1.25, 1.5, 2.0, 4.0, 8.0};
  for (double q : kLadder) {
    ConstantWitness c = a_q_constant(w, q);
    if (std::isfinite(c.value) && c.value <= cap) {
      if (out) *out = c;
      return q;
    }
  }
  throw std::runtime_error("choose_a_q: no ladder q certifies the weight");
}

WeightProfile profile_weight(const GridFunction& w,
                             std::optional<double> rh_exponent, bool scan_q,
                             double aq_cap) {
  WeightProfile p;
  p.a1 = a1_constant(w);
  p.ainf = a_infty_constant(w);
  p.tau = tau_dimensional(w.grid().dimension());
  p.r_w = 1.0 + 1.0 / (p.tau * p.ainf.value);
  p.eps_w = 1.0 / (1.0 + p.tau * p.ainf.value);
  if (scan_q) p.q_used = choose_a_q(w, aq_cap, &p.aq);
  if (rh_exponent) {
    p.s_used = *rh_exponent;
    p.rh = rh_constant(w, p.s_used);
  }
  return p;
}

}  // namespace olab
