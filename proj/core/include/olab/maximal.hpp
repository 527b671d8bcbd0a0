#pragma once

#include <string>
#include <vector>

#include "olab/grid.hpp"
#include "olab/orlicz.hpp"
#include "olab/young.hpp"

namespace olab {

/// ||f||_{Phi,Q} with Lebesgue measure; the single entry point used by both
/// the fast sweep and the naive test oracle, so their values agree bitwise.
double cube_norm(const GridFunction& f, const DyadicCube& q,
                 const YoungFunction& phi);

/// Luxemburg norms of f over every dyadic cube, one bisection per cube.
struct CubeNormTable {
  DyadicGrid grid{1, 0};
  std::vector<std::vector<double>> norms;  // norms[level][linear index]

  double at(const DyadicCube& q) const {
    return norms[q.level][grid.cube_linear_index(q)];
  }
};

CubeNormTable cube_norms(const GridFunction& f, const YoungFunction& phi);

/// |Q|^{gamma/n} for a level-j cube: 2^{-j gamma}. Shared with the naive
/// oracle so fractional weighting is bit-identical.
double fractional_level_factor(int level, double gamma);

struct ArgmaxCube {
  int level = 0;
  std::array<std::uint32_t, 2> coord{0, 0};
};

struct MaximalResult {
  GridFunction output;
  std::vector<ArgmaxCube> argmax;  // per cell; ties keep the coarsest cube
  std::string descriptor;
};

/// M_{Phi,D} f: per cell, max over the dyadic ancestors of the cell of
/// ||f||_{Phi,Q}. One root-to-leaf sweep over the memoized norm table.
MaximalResult m_phi_dyadic(const GridFunction& f, const YoungFunction& phi);

/// M_{gamma,Phi} f: per cell, max over ancestors of |Q|^{gamma/n} ||f||_{Phi,Q};
/// requires 0 < gamma < n.
MaximalResult m_gamma_phi(const GridFunction& f, const YoungFunction& phi,
                          double gamma);

/// Shared sweep: gamma == 0 reproduces m_phi_dyadic.
MaximalResult sweep_from_table(const CubeNormTable& table, double gamma,
                               std::string descriptor);

struct SawyerQuotients {
  GridFunction s;  // S_Phi f = M_Phi(fv)/v
  GridFunction t;  // T_Phi f = M_Phi(fv)/M_Phi(v)
};

/// Requires v > 0 everywhere.
SawyerQuotients sawyer_quotients(const GridFunction& f, const GridFunction& v,
                                 const YoungFunction& phi);

}  // namespace olab
