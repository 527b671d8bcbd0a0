#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "olab/grid.hpp"

namespace olab {

/// Dimensional constant tau_n = 2^{11+n} of the reverse Hoelder lemma.
double tau_dimensional(int n);

struct ConstantWitness {
  double value = 1.0;
  DyadicCube cube;
};

/// [w]_{Ainf}: exact max over all dyadic cubes of
/// (avg_Q w) * exp(avg_Q log w^{-1}). Any zero cell is a domain error.
ConstantWitness a_infty_constant(const GridFunction& w);

/// [w]_{A1}: max over cubes of (avg_Q w) / (ess-inf_Q w).
ConstantWitness a1_constant(const GridFunction& w);

/// [w]_{Aq}: max over cubes of (avg_Q w) (avg_Q w^{1-q'})^{q-1}, q' = q/(q-1).
ConstantWitness a_q_constant(const GridFunction& w, double q);

/// [w]_{RHs}: max over cubes of (avg_Q w^s)^{1/s} / (avg_Q w).
ConstantWitness rh_constant(const GridFunction& w, double s);

/// Weight constructors. All results are strictly positive.
GridFunction make_constant_weight(const DyadicGrid& grid, double value);

/// Equal-width segments along axis 0; values.size() segments.
GridFunction make_step_weight(const DyadicGrid& grid,
                              const std::vector<double>& values);

/// |x - center|^{-alpha}; alpha in [0, n). In 1D the cell value is the exact
/// cell average via the antiderivative; in 2D it is the centroid value.
GridFunction make_power_weight(const DyadicGrid& grid, double alpha,
                               std::array<double, 2> center);

struct PowerTerm {
  double alpha = 0.0;
  std::array<double, 2> center{0.0, 0.0};
  double scale = 1.0;
};

/// Cellwise max of scaled power weights (an A1-like test weight).
GridFunction make_max_power_weight(const DyadicGrid& grid,
                                   std::span<const PowerTerm> terms);

struct WeightProfile {
  ConstantWitness a1;
  ConstantWitness ainf;
  double tau = 0.0;    // 2^{11+n}
  double r_w = 1.0;    // 1 + 1/(tau [w]_Ainf)
  double eps_w = 0.0;  // 1/(1 + tau [w]_Ainf)
  double q_used = 0.0;
  ConstantWitness aq;
  double s_used = 0.0;
  ConstantWitness rh;
};

/// Computes the dyadic constants of w plus the derived reverse-Hoelder
/// exponents. When scan_q is set, q is chosen as the smallest entry of
/// {1.25, 1.5, 2, 4, 8} whose A_q constant stays below aq_cap.
WeightProfile profile_weight(const GridFunction& w,
                             std::optional<double> rh_exponent = std::nullopt,
                             bool scan_q = false, double aq_cap = 1e6);

/// Smallest ladder q with [w]_{Aq} <= cap; throws if none qualifies.
double choose_a_q(const GridFunction& w, double cap, ConstantWitness* out);

}  // namespace olab
