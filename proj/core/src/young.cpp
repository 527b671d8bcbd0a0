#include "olab/young.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace olab {

namespace {
constexpr double kLogCap = 690.77552789821368;  // ln(1e300)
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double log_plus(double z) {
  if (z <= 1.0) return 0.0;
  return std::log(z);
}

namespace {

double power_log_eval(double power, double logp, double z) {
  if (z <= 0.0) return 0.0;
  const double lp = log_plus(z);
  const double ln_val = power * std::log(z) + logp * std::log1p(lp);
  if (ln_val >= kLogCap) return kEvalCap;
  return std::pow(z, power) * std::pow(1.0 + lp, logp);
}

}  // namespace

YoungFunction make_power_log(double power, double logp, std::string name) {
  YoungFunction f;
  f.name = std::move(name);
  f.eval = [power, logp](double z) { return power_log_eval(power, logp, z); };
  f.lower_type = power;
  f.log_power = logp;
  return f;
}

YoungFunction make_canonical(double r, double delta) {
  if (r < 1.0) throw std::invalid_argument("canonical Young: r must be >= 1");
  if (delta < 0.0) throw std::invalid_argument("canonical Young: delta must be >= 0");
  YoungFunction f = make_power_log(
      r, delta, "canonical(r=" + std::to_string(r) + ",delta=" + std::to_string(delta) + ")");
  f.growth_c0 = std::pow(2.0, delta);
  f.growth_tstar = std::exp(1.0);
  f.canonical = true;
  return f;
}

YoungFunction make_eta_eps(double delta, double eps) {
  if (eps <= 0.0 && delta > 0.0)
    throw std::invalid_argument("eta_eps: eps must be positive when delta > 0");
  const double e = delta > 0.0 ? delta / eps : 0.0;
  return make_power_log(1.0, e, "eta_eps(delta/eps=" + std::to_string(e) + ")");
}

YoungFunction make_psi_eps(const YoungFunction& phi, double delta, double eps) {
  YoungFunction eta = make_eta_eps(delta, eps);
  YoungFunction f;
  f.name = "psi_eps[" + phi.name + "]";
  auto phi_eval = phi.eval;
  auto eta_eval = eta.eval;
  f.eval = [phi_eval, eta_eval](double z) { return eta_eval(phi_eval(z)); };
  f.lower_type = phi.lower_type;
  f.log_power = phi.log_power + eta.log_power;
  return f;
}

YoungFunction make_eta_tilde_eps(double delta, double eps) {
  if (delta <= 0.0)
    throw std::invalid_argument("eta_tilde_eps: requires delta > 0 (eps/delta exponent)");
  if (eps <= 0.0) throw std::invalid_argument("eta_tilde_eps: eps must be positive");
  const double c = eps / delta;
  YoungFunction f;
  f.name = "eta_tilde_eps(eps/delta=" + std::to_string(c) + ")";
  f.eval = [c](double z) {
    if (z <= 1.0) return 0.0;
    const double w = c * std::log(z);  // ln of z^{eps/delta}
    if (w >= std::log(kLogCap)) return kEvalCap;
    return std::exp(std::exp(w)) - std::exp(1.0);
  };
  return f;
}

YoungFunction make_xi(double q, double nu) {
  return make_power_log(q, nu, "xi(q=" + std::to_string(q) + ",nu=" + std::to_string(nu) + ")");
}

YoungFunction make_xi_piecewise(double low_exp, double sigma, double nu) {
  YoungFunction f;
  f.name = "xi_piecewise(low=" + std::to_string(low_exp) +
           ",sigma=" + std::to_string(sigma) + ",nu=" + std::to_string(nu) + ")";
  f.eval = [low_exp, sigma, nu](double z) {
    if (z <= 0.0) return 0.0;
    if (z <= 1.0) return std::pow(z, low_exp);
    return power_log_eval(sigma, nu, z);
  };
  f.lower_type = low_exp;
  f.log_power = nu;
  return f;
}

YoungFunction make_phi_small(double q, double p, double inv_rprime, int n,
                             double r, double gamma, double delta) {
  const double power = q / p + q * inv_rprime;
  const double logp = n * delta / (n - r * gamma);
  return make_power_log(power, logp, "phi_small");
}

YoungFunction make_varphi_eps(double delta, double eps, double q, double r) {
  // [z (1+log+z)^{delta(1+1/eps)}]^{q/r} = z^{q/r} (1+log+z)^{delta(1+1/eps)q/r}
  const double s = q / r;
  return make_power_log(s, delta * (1.0 + 1.0 / eps) * s, "varphi_eps");
}

YoungFunction make_phi_gamma_eps(double r, double delta, double eps, double q,
                                 double gamma, int n, PhiGammaVariant variant) {
  if (eps <= 0.0 && delta > 0.0)
    throw std::invalid_argument("phi_gamma_eps: eps must be positive when delta > 0");
  if (variant == PhiGammaVariant::statement) {
    const double extra =
        delta > 0.0 ? delta * (1.0 + 1.0 / eps) * q * gamma / n + delta / eps : 0.0;
    return make_power_log(r, delta + extra, "phi_gamma_eps.statement");
  }
  const double nu = delta * q / r;
  const double logp = delta > 0.0 ? nu * (1.0 + 1.0 / eps) : 0.0;
  return make_power_log(r, logp, "phi_gamma_eps.proof");
}

YoungFunction make_psi_eps_fractional(double r, double q, double delta,
                                      double eps) {
  const double logp = delta > 0.0 ? q * delta * (1.0 + 1.0 / eps) / r : 0.0;
  const double inner = 1.0 - q / r;  // negative for q > r
  YoungFunction f;
  f.name = "psi_eps_fractional";
  f.eval = [r, logp, inner](double z) {
    if (z <= 0.0) return 0.0;
    const double lp = std::max(0.0, inner * std::log(z));  // log+(z^{1-q/r})
    const double ln_val = r * std::log(z) + logp * std::log1p(lp);
    if (ln_val >= kLogCap) return kEvalCap;
    return std::pow(z, r) * std::pow(1.0 + lp, logp);
  };
  f.lower_type = r;
  f.log_power = logp;
  return f;
}

YoungFunction derive(DerivedTag tag, const DeriveParams& p) {
  switch (tag) {
    case DerivedTag::eta_eps:
      return make_eta_eps(p.delta, p.eps);
    case DerivedTag::psi_eps:
      return make_psi_eps(make_canonical(p.r, p.delta), p.delta, p.eps);
    case DerivedTag::eta_tilde_eps:
      return make_eta_tilde_eps(p.delta, p.eps);
    case DerivedTag::xi:
      if (p.xi_low_exp > 0.0)
        return make_xi_piecewise(p.xi_low_exp, p.sigma, p.nu);
      return make_xi(p.q, p.nu);
    case DerivedTag::phi_small: {
      const double inv_rprime = p.r > 1.0 ? 1.0 - 1.0 / p.r : 0.0;
      return make_phi_small(p.q, p.p, inv_rprime, p.n, p.r, p.gamma, p.delta);
    }
    case DerivedTag::varphi_eps:
      return make_varphi_eps(p.delta, p.eps, p.q, p.r);
    case DerivedTag::phi_gamma_eps:
      return make_phi_gamma_eps(p.r, p.delta, p.eps, p.q, p.gamma, p.n, p.variant);
    case DerivedTag::psi_eps_fractional:
      return make_psi_eps_fractional(p.r, p.q, p.delta, p.eps);
  }
  throw std::invalid_argument("derive: unknown tag");
}

double YoungFunction::inverse(double y, double rel_tol) const {
  if (!(y >= 0.0)) throw std::invalid_argument("inverse: y must be >= 0");
  if (y == 0.0) return 0.0;
  if (y >= kEvalCap)
    throw std::runtime_error("inverse: target beyond saturation cap");

  double hi = 1.0;
  double fhi = eval(hi);
  double prev_t = hi, prev_f = fhi;
  int guard = 0;
  while (fhi < y) {
    hi *= 2.0;
    fhi = eval(hi);
    if (fhi < prev_f - 1e-12 * std::max(1.0, prev_f))
      throw std::runtime_error("inverse: non-monotone samples detected");
    prev_t = hi;
    prev_f = fhi;
    if (++guard > 4000)
      throw std::runtime_error("inverse: no upper bracket found");
  }
  (void)prev_t;
  double lo = hi * 0.5;
  if (hi == 1.0) {
    lo = 0.5;
    double flo = eval(lo);
    guard = 0;
    while (flo >= y && lo > 1e-300) {
      lo *= 0.5;
      const double f2 = eval(lo);
      if (f2 > flo + 1e-12 * std::max(1.0, flo))
        throw std::runtime_error("inverse: non-monotone samples detected");
      flo = f2;
      if (++guard > 4000) break;
    }
  }

  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval(mid);
    if (std::abs(fm - y) <= rel_tol * std::max(1.0, y)) return mid;
    if (fm < y)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= rel_tol * std::max(hi, 1e-300)) break;
  }
  return 0.5 * (lo + hi);
}

FamilyCertificate certify_family(const YoungFunction& phi, double r,
                                 double delta, int sample_budget) {
  FamilyCertificate cert;
  cert.witness_s = kNaN;
  cert.witness_t = kNaN;

  int m = sample_budget;
  if (m < 16) m = 16;
  if (m > 400) m = 400;
  std::vector<double> lattice(m);
  const double lo = std::log(1e-6), hi = std::log(1e6);
  for (int i = 0; i < m; ++i)
    lattice[i] = std::exp(lo + (hi - lo) * i / (m - 1));

  const double slack = 1e-9;

  // Submultiplicativity and lower type, compared in log space to dodge
  // under/overflow on the outer lattice points.
  for (double s : lattice) {
    const double ln_phi_s = std::log(phi(s));
    for (double t : lattice) {
      const double st = s * t;
      const double p_st = phi(st);
      const double p_t = phi(t);
      if (is_saturated(p_st) || is_saturated(p_t) || is_saturated(phi(s))) {
        ++cert.saturated_pairs;
        continue;
      }
      const double ln_st = std::log(p_st);
      if (p_st > 0.0 && p_t > 0.0) {
        const double excess = ln_st - (ln_phi_s + std::log(p_t));
        if (excess > slack) {
          cert.submultiplicative = false;
          if (excess > cert.worst_submult_excess) {
            cert.worst_submult_excess = excess;
            cert.witness_s = s;
            cert.witness_t = t;
          }
        }
      }
      if (s <= 1.0 && p_st > 0.0 && p_t > 0.0) {
        const double excess = ln_st - (r * std::log(s) + std::log(p_t));
        if (excess > slack) {
          cert.lower_type_r = false;
          if (excess > cert.worst_lower_type_excess) {
            cert.worst_lower_type_excess = excess;
            cert.witness_s = s;
            cert.witness_t = t;
          }
        }
      }
    }
  }

  // Growth: Phi(t)/t^r <= C0 (log t)^delta for t >= t*. Canonical members
  // carry the analytic pair (2^delta, e); otherwise measure C0 at t* = e.
  const double tstar = phi.canonical ? phi.growth_tstar : std::exp(1.0);
  double c0 = phi.canonical ? phi.growth_c0 : 0.0;
  double measured = 0.0;
  for (double t : lattice) {
    if (t < tstar * (1.0 - 1e-12)) continue;
    const double pt = phi(t);
    if (is_saturated(pt)) {
      ++cert.saturated_pairs;
      cert.growth = false;
      continue;
    }
    const double lt = std::log(t);
    const double ratio = std::exp(std::log(pt) - r * lt - delta * std::log(lt));
    measured = std::max(measured, ratio);
  }
  if (phi.canonical) {
    if (measured > c0 * (1.0 + slack)) {
      cert.growth = false;
      cert.witness_t = measured;
    }
  } else {
    c0 = measured;
    if (!std::isfinite(measured) || measured <= 0.0) cert.growth = false;
  }
  cert.c0 = c0;
  cert.tstar = tstar;
  return cert;
}

}  // namespace olab
