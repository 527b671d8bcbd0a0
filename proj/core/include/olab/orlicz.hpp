#pragma once

#include <span>
#include <vector>

#include "olab/grid.hpp"
#include "olab/young.hpp"

namespace olab {

/// Luxemburg norm of the sample (g_i, mu_i): inf{ lambda > 0 :
/// sum mu_i Phi(g_i/lambda) / sum mu_i <= 1 }. Monotone bisection with the
/// bracket [max g / Phi^{-1}(big), max g / Phi^{-1}(tiny)], expanded
/// geometrically; the returned lambda* satisfies
/// mean Phi(g/lambda*) in [1-tol, 1+tol]. Zero-measure cells are absent from
/// the mean; g == 0 a.e. gives norm 0. Total measure 0 is a domain error.
double luxemburg_norm(std::span<const double> g, std::span<const double> mu,
                      const YoungFunction& phi, double tol = 1e-10);

/// Lebesgue-measure variant (all cells carry equal measure).
double luxemburg_norm(std::span<const double> g, const YoungFunction& phi,
                      double tol = 1e-10);

/// ||g||_{Phi,Q} with respect to Lebesgue measure on Q.
double luxemburg_norm(const GridFunction& g, const DyadicCube& q,
                      const YoungFunction& phi);

/// ||g||_{Phi,Q,w} with respect to d(mu) = w dx on Q.
double luxemburg_norm_weighted(const GridFunction& g, const GridFunction& w,
                               const DyadicCube& q, const YoungFunction& phi);

struct InfFormResult {
  double value = 0.0;
  double minimizer_tau = 0.0;
};

/// inf over tau of tau + (tau / mu(Q)) * integral of eta(g/tau) d(mu),
/// located by a coarse log-spaced scan over [1e-12, 1e12] followed by
/// golden-section refinement.
InfFormResult inf_form_norm(std::span<const double> g,
                            std::span<const double> mu,
                            const YoungFunction& eta);

InfFormResult inf_form_norm_weighted(const GridFunction& g,
                                     const GridFunction& w,
                                     const DyadicCube& q,
                                     const YoungFunction& eta);

/// The objective above at a specific tau (used by the tau-choice steps).
double inf_form_value_at(std::span<const double> g, std::span<const double> mu,
                         const YoungFunction& eta, double tau);

double inf_form_value_at_weighted(const GridFunction& g, const GridFunction& w,
                                  const DyadicCube& q,
                                  const YoungFunction& eta, double tau);

struct HolderReport {
  double lhs = 0.0;   // (1/|Q|) integral of f_part * w_k * vr over Q
  double rhs = 0.0;   // (vr(Q)/|Q|) ||f_part||_{eta,Q,vr} ||w_k||_{eta~,Q,vr}
  double ratio = 0.0;
  double norm_f = 0.0;
  double norm_w = 0.0;
  bool pass = true;
  bool degenerate = false;  // vr(Q) == 0: skipped
};

/// Generalized Hoelder inequality with respect to d(mu) = vr dx on Q.
HolderReport check_generalized_holder(const GridFunction& f_part,
                                      const GridFunction& w_k,
                                      const DyadicCube& q,
                                      const YoungFunction& eta,
                                      const YoungFunction& eta_tilde,
                                      const GridFunction& vr);

/// Tracked equivalence factor of the (eta, eta~) pairing:
/// 2 sup_t eta^{-1}(t) eta~^{-1}(t) / t over a log lattice. The display
/// mean(fg) <= C ||f||_eta ||g||_eta~ holds with this C; the constant-1 form
/// does not survive the exact eta~ normalization (its eta~^{-1}(1) exceeds 1).
double holder_equivalence_factor(const YoungFunction& eta,
                                 const YoungFunction& eta_tilde);

/// Scratch gather of a cube's cell values (ascending cell order).
void gather_cells(const GridFunction& f, const DyadicCube& q,
                  std::vector<double>& out);

}  // namespace olab
