#pragma once

#include <functional>
#include <string>
#include <vector>

namespace olab {

/// Evaluations saturate at this cap instead of overflowing; callers detect
/// saturation with is_saturated(). Never silent: verifiers flag instances
/// whose inputs hit the cap.
inline constexpr double kEvalCap = 1e300;

inline bool is_saturated(double v) { return v >= kEvalCap; }

/// log+ z = max(0, ln z), natural logarithm.
double log_plus(double z);

/// Evaluatable Young-type growth function. The canonical family member is
/// z^r (1+log+ z)^delta with witnesses C0 = 2^delta, t* = e for the growth
/// condition Phi(t)/t^r <= C0 (log t)^delta, t >= t*.
struct YoungFunction {
  std::string name;
  std::function<double(double)> eval;

  double lower_type = 1.0;    // r
  double log_power = 0.0;     // delta
  double growth_c0 = 1.0;     // C0
  double growth_tstar = 1.0;  // t*
  bool canonical = false;

  double operator()(double z) const { return eval(z); }

  /// Monotone bracketing + bisection to relative tolerance rel_tol.
  /// Returns t with |Phi(t) - y| <= rel_tol * max(1, y).
  double inverse(double y, double rel_tol = 1e-12) const;
};

/// z^a (1+log+ z)^b, evaluated in log space near the saturation cap.
YoungFunction make_power_log(double power, double logp, std::string name);

/// Phi(z) = z^r (1+log+ z)^delta; requires r >= 1, delta >= 0.
YoungFunction make_canonical(double r, double delta);

/// eta_eps(z) = z (1+log+ z)^{delta/eps}.
YoungFunction make_eta_eps(double delta, double eps);

/// Psi_eps = eta_eps o Phi.
YoungFunction make_psi_eps(const YoungFunction& phi, double delta, double eps);

/// eta~_eps(z) = (e^{z^{eps/delta}} - e) X_(1,inf)(z); requires delta > 0.
YoungFunction make_eta_tilde_eps(double delta, double eps);

/// xi(z) = z^q (1+log+ z)^nu.
YoungFunction make_xi(double q, double nu);

/// Piecewise xi: z^{low_exp} on [0,1], z^sigma (1+log+ z)^nu beyond.
YoungFunction make_xi_piecewise(double low_exp, double sigma, double nu);

/// phi(z) = z^{q/p + q/r'} (1+log+ z)^{n delta/(n - r gamma)}.
YoungFunction make_phi_small(double q, double p, double inv_rprime, int n,
                             double r, double gamma, double delta);

/// varphi_eps(z) = [z (1+log+ z)^{delta(1+1/eps)}]^{q/r}.
YoungFunction make_varphi_eps(double delta, double eps, double q, double r);

enum class PhiGammaVariant { statement, proof };

/// Phi_{gamma,eps}: statement form Phi(z)(1+log+z)^{delta(1+1/eps)q gamma/n
/// + delta/eps}; proof form z^r (1+log+ z)^{nu(1+1/eps)} with nu = delta q/r.
YoungFunction make_phi_gamma_eps(double r, double delta, double eps, double q,
                                 double gamma, int n, PhiGammaVariant variant);

/// Psi_eps(z) = z^r (1+log+(z^{1-q/r}))^{q delta (1+1/eps)/r}; the inner
/// power 1-q/r is negative, so the log+ activates only for z < 1.
YoungFunction make_psi_eps_fractional(double r, double q, double delta,
                                      double eps);

/// Config-facing constructor tags.
enum class DerivedTag {
  eta_eps,
  psi_eps,
  eta_tilde_eps,
  xi,
  phi_small,
  varphi_eps,
  phi_gamma_eps,
  psi_eps_fractional,
};

struct DeriveParams {
  double eps = 0.0;
  double gamma = 0.0;
  double p = 0.0;
  double q = 0.0;
  double r = 1.0;
  double delta = 0.0;
  int n = 1;
  double nu = 0.0;
  double sigma = 0.0;
  double xi_low_exp = 0.0;  // nonzero selects the piecewise xi branch
  PhiGammaVariant variant = PhiGammaVariant::proof;
};

YoungFunction derive(DerivedTag tag, const DeriveParams& p);

/// Lattice certificate for membership in the family F_{r,delta}.
struct FamilyCertificate {
  bool submultiplicative = true;
  bool lower_type_r = true;
  bool growth = true;
  double c0 = 1.0;
  double tstar = 1.0;
  // failing witnesses (quiet NaN when the check passed)
  double witness_s = 0.0;
  double witness_t = 0.0;
  double worst_submult_excess = 0.0;  // max of Phi(st)/(Phi(s)Phi(t)) - 1
  double worst_lower_type_excess = 0.0;
  int saturated_pairs = 0;
};

/// Checks Phi(st) <= Phi(s)Phi(t), Phi(st) <= s^r Phi(t) for s <= 1, and the
/// growth display for t >= t*, over a log-spaced lattice on [1e-6, 1e6].
/// sample_budget bounds the lattice size per axis.
FamilyCertificate certify_family(const YoungFunction& phi, double r,
                                 double delta, int sample_budget = 160);

}  // namespace olab
