#include "olab/maximal.hpp"

#include <cmath>
#include <stdexcept>

namespace olab {

double cube_norm(const GridFunction& f, const DyadicCube& q,
                 const YoungFunction& phi) {
  return luxemburg_norm(f, q, phi);
}

CubeNormTable cube_norms(const GridFunction& f, const YoungFunction& phi) {
  const DyadicGrid& grid = f.grid();
  CubeNormTable table;
  table.grid = grid;
  table.norms.resize(grid.max_level() + 1);
  for (int j = 0; j <= grid.max_level(); ++j) {
    const std::size_t count = grid.level_cube_count(j);
    table.norms[j].resize(count);
    for (std::size_t i = 0; i < count; ++i)
      table.norms[j][i] = cube_norm(f, grid.cube_at(j, i), phi);
  }
  return table;
}

double fractional_level_factor(int level, double gamma) {
  if (gamma == 0.0) return 1.0;
  return std::pow(2.0, -static_cast<double>(level) * gamma);
}

MaximalResult sweep_from_table(const CubeNormTable& table, double gamma,
                               std::string descriptor) {
  const DyadicGrid& grid = table.grid;
  const int L = grid.max_level();

  std::vector<double> best(1, table.norms[0][0] * fractional_level_factor(0, gamma));
  std::vector<ArgmaxCube> best_arg(1, ArgmaxCube{0, {0, 0}});

  for (int j = 1; j <= L; ++j) {
    const std::size_t count = grid.level_cube_count(j);
    std::vector<double> cur(count);
    std::vector<ArgmaxCube> cur_arg(count);
    const double factor = fractional_level_factor(j, gamma);
    for (std::size_t i = 0; i < count; ++i) {
      const DyadicCube q = grid.cube_at(j, i);
      DyadicCube par;
      par.level = j - 1;
      for (int ax = 0; ax < grid.dimension(); ++ax) par.coord[ax] = q.coord[ax] >> 1;
      const std::size_t pi = grid.cube_linear_index(par);
      const double candidate = table.norms[j][i] * factor;
      if (candidate > best[pi]) {
        cur[i] = candidate;
        cur_arg[i] = ArgmaxCube{j, q.coord};
      } else {
        cur[i] = best[pi];
        cur_arg[i] = best_arg[pi];
      }
    }
    best = std::move(cur);
    best_arg = std::move(cur_arg);
  }

  MaximalResult res{GridFunction(grid, std::move(best)), std::move(best_arg),
                    std::move(descriptor)};
  return res;
}

MaximalResult m_phi_dyadic(const GridFunction& f, const YoungFunction& phi) {
  return sweep_from_table(cube_norms(f, phi), 0.0, "M_{Phi,D}[" + phi.name + "]");
}

MaximalResult m_gamma_phi(const GridFunction& f, const YoungFunction& phi,
                          double gamma) {
  const int n = f.grid().dimension();
  if (!(gamma > 0.0) || !(gamma < n))
    throw std::invalid_argument("m_gamma_phi: gamma must lie in (0, n)");
  return sweep_from_table(cube_norms(f, phi), gamma,
                          "M_{gamma,Phi}[gamma=" + std::to_string(gamma) + "," +
                              phi.name + "]");
}

SawyerQuotients sawyer_quotients(const GridFunction& f, const GridFunction& v,
                                 const YoungFunction& phi) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0.0))
      throw std::domain_error("sawyer_quotients: v must be strictly positive");
  const GridFunction fv = pointwise_product(f, v);
  const MaximalResult m_fv = m_phi_dyadic(fv, phi);
  const MaximalResult m_v = m_phi_dyadic(v, phi);
  return SawyerQuotients{pointwise_quotient(m_fv.output, v),
                         pointwise_quotient(m_fv.output, m_v.output)};
}

}  // namespace olab
