#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "olab/cz.hpp"
#include "olab/grid.hpp"
#include "olab/maximal.hpp"
#include "olab/orlicz.hpp"
#include "olab/weights.hpp"
#include "olab/young.hpp"

namespace olab {

inline constexpr int kNoIndex = std::numeric_limits<int>::min();

struct InstanceRecord {
  std::string suite;
  std::string instance_id;
  int k = kNoIndex;
  int ell = kNoIndex;
  std::string witness;  // cube, cell, or "t=..."
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = true;
  bool degenerate = false;
  bool saturated = false;
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::vector<InstanceRecord> records;
  double empirical_constant = 0.0;  // sup ratio over non-degenerate records
  std::size_t worst_index = 0;
  bool pass = true;
  std::size_t violations = 0;
  std::size_t degenerate_count = 0;
  std::size_t saturated_count = 0;
  std::map<std::string, double> constants;

  void add(InstanceRecord rec);
  void merge_child(const VerificationReport& child);
};

/// Per-sweep weight data and the admissible-epsilon bookkeeping of the main
/// theorem: eps2 = r/((q-1)(1+tau [u]_Ainf)), eps1 the largest ladder value
/// with [v^{r+eps}]_Ainf below the certification cap, eps0 = min(eps1, eps2).
struct SweepContext {
  int n = 1;
  double a = 4.0;
  double r = 1.0;
  double delta = 0.0;
  double tau = 0.0;
  double u_ainf = 1.0;
  double u_a1 = 1.0;
  double vr_ainf = 1.0;
  double q = 2.0;
  double vr_aq = 1.0;
  double theta = 0.0;    // exponent of the v^r A-infinity display
  double theta_c = 2.0;  // its constant
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps0 = 0.0;
};

SweepContext make_context(const GridFunction& u, const GridFunction& v,
                          double r, double delta, double a,
                          double aq_cap = 1e6, double ainf_cap = 1e6);

std::vector<double> log_spaced(double lo, double hi, int count);

struct TGrid {
  double min = 1e-3;
  double max = 1e3;
  int count = 25;
  std::vector<double> points() const { return log_spaced(min, max, count); }
};

/// Both displays of the reverse Hoelder lemma with tau_n = 2^{11+n}: the
/// r_w-average display over every dyadic cube, and the subset display for
/// random cell subsets (subsets_per_cube draws per cube).
VerificationReport verify_reverse_holder(const GridFunction& w,
                                         std::uint64_t seed,
                                         int subsets_per_cube = 200);

/// u(E_k cap Q_j^k) <= c1 e^{-c2 r l} u(Q_j^k) with the explicit c1, c2, over
/// every Gamma_{l,k} cube of the decomposition, plus the intermediate
/// (|E_k cap Q|/|Q|)^{q-1} <= [v^r]_{Aq} a^{(1-l)r} step.
VerificationReport verify_level_set_lemma(const GridFunction& u,
                                          const GridFunction& v,
                                          const SweepContext& ctx,
                                          const CZDecomposition& d);

/// Corrected Claim 1 over the Gamma_{l,k} cubes (l >= 0): case split, both
/// branch displays, the generalized Hoelder step, the eta~ norm bound with
/// its RH chain, the tau-choice step, and the final display with the
/// assembled constant.
VerificationReport verify_claim1(const GridFunction& f, const GridFunction& v,
                                 const YoungFunction& phi, double eps,
                                 const SweepContext& ctx,
                                 const CZDecomposition& d);

/// Corrected Claim 3 over the Lambda_{-1,k} cubes (l-free bounds).
VerificationReport verify_claim3(const GridFunction& f, const GridFunction& v,
                                 const YoungFunction& phi, double eps,
                                 const SweepContext& ctx,
                                 const CZDecomposition& d);

/// Main mixed weak-type display over the (eps, t) grid plus the finite-N
/// A_N/B_N machinery (splitting, level-set application, principal-cube
/// surrogates, stabilization).
VerificationReport verify_theorem1(const GridFunction& u,
                                   const GridFunction& v,
                                   const GridFunction& f,
                                   const YoungFunction& phi,
                                   const std::vector<double>& eps_ladder,
                                   const TGrid& t_grid, const SweepContext& ctx,
                                   bool with_an_bn = true);

/// Corollary 1 (quotient by M_Phi v), the M_Phi v >= c v premise, the
/// empirical norm-equivalence constants of a Psi ~ Phi, Corollary 3 with the
/// measured C1, C2, and the L-infinity contraction of T_Psi.
VerificationReport verify_corollaries(const GridFunction& u,
                                      const GridFunction& v,
                                      const GridFunction& f,
                                      const YoungFunction& phi,
                                      const YoungFunction& psi, double t0,
                                      double eps, const TGrid& t_grid,
                                      const SweepContext& ctx);

/// Fractional theorem for r < p < n/gamma: exponent identities, the xi / phi
/// auxiliary bounds, the pointwise (M_xi v^beta)^{1/beta} <= C M_phi v check,
/// and the main display over the t grid.
VerificationReport verify_fractional_mid(const GridFunction& u,
                                         const GridFunction& v,
                                         const GridFunction& f, double r,
                                         double delta, double gamma, double p,
                                         const TGrid& t_grid);

/// Fractional theorem for p = r: both Phi_{gamma,eps} variants, the chain
/// inequalities, and the main display over the t grid.
VerificationReport verify_fractional_diag(const GridFunction& u,
                                          const GridFunction& v,
                                          const GridFunction& f, double r,
                                          double delta, double gamma,
                                          double eps, const TGrid& t_grid);

/// sigma beta = q(1/p + 1/r') and 1/q = 1/p - gamma/n over random admissible
/// parameter draws, to 1e-12.
VerificationReport verify_fractional_identities(std::uint64_t seed,
                                                int draws = 50);

}  // namespace olab
