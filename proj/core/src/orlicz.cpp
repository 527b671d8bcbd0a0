#include "olab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace olab {

namespace {

// Mean of Phi(g/lambda) against the relative measures mu (uniform when mu is
// empty). total is the precomputed sum of mu.
double phi_mean(std::span<const double> g, std::span<const double> mu,
                double total, const YoungFunction& phi, double lambda) {
  double acc = 0.0;
  if (mu.empty()) {
    for (double gi : g) acc += phi(gi / lambda);
    return acc / static_cast<double>(g.size());
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mu[i] > 0.0) acc += mu[i] * phi(g[i] / lambda);
  }
  return acc / total;
}

double norm_core(std::span<const double> g, std::span<const double> mu,
                 const YoungFunction& phi, double tol) {
  double total = 0.0;
  double gmax = 0.0;
  if (mu.empty()) {
    total = static_cast<double>(g.size());
    for (double gi : g) gmax = std::max(gmax, gi);
  } else {
    if (mu.size() != g.size())
      throw std::invalid_argument("luxemburg_norm: measure size mismatch");
    for (std::size_t i = 0; i < g.size(); ++i) {
      total += mu[i];
      if (mu[i] > 0.0) gmax = std::max(gmax, g[i]);
    }
  }
  if (g.empty() || total <= 0.0)
    throw std::domain_error("luxemburg_norm: measure of the cube is zero");
  if (gmax == 0.0) return 0.0;
  for (double gi : g)
    if (!std::isfinite(gi))
      throw std::runtime_error("luxemburg_norm: non-finite input value");

  // Bracket seeded at [gmax/Phi^{-1}(big), gmax/Phi^{-1}(tiny)] when those
  // inverses are reachable (they are not for doubly-exponential functions),
  // then expanded geometrically until mean(lo) >= 1 >= mean(hi).
  double lo = gmax, hi = gmax;
  try {
    lo = gmax / phi.inverse(1e12);
  } catch (const std::exception&) {
  }
  try {
    hi = gmax / phi.inverse(1e-12);
  } catch (const std::exception&) {
  }
  if (!(lo > 0.0) || !std::isfinite(lo)) lo = gmax;
  if (!(hi >= lo) || !std::isfinite(hi)) hi = lo;

  int guard = 0;
  while (phi_mean(g, mu, total, phi, hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 2000)
      throw std::runtime_error("luxemburg_norm: no upper bracket");
  }
  guard = 0;
  while (phi_mean(g, mu, total, phi, lo) < 1.0) {
    lo *= 0.5;
    if (lo < 1e-300 || ++guard > 2000) break;
  }
  if (phi_mean(g, mu, total, phi, lo) < 1.0) {
    // mean stays below 1 all the way down: the infimum is 0.
    return 0.0;
  }

  // Geometric bisection; the mean is continuous and nonincreasing in lambda.
  double mid = std::sqrt(lo * hi);
  for (int it = 0; it < 400; ++it) {
    mid = std::sqrt(lo * hi);
    const double m = phi_mean(g, mu, total, phi, mid);
    if (std::abs(m - 1.0) <= 0.01 * tol) return mid;
    if (m > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  mid = std::sqrt(lo * hi);
  const double final_mean = phi_mean(g, mu, total, phi, mid);
  if (std::abs(final_mean - 1.0) > tol)
    throw std::runtime_error("luxemburg_norm: bisection failed to settle");
  return mid;
}

}  // namespace

double luxemburg_norm(std::span<const double> g, std::span<const double> mu,
                      const YoungFunction& phi, double tol) {
  return norm_core(g, mu, phi, tol);
}

double luxemburg_norm(std::span<const double> g, const YoungFunction& phi,
                      double tol) {
  return norm_core(g, {}, phi, tol);
}

void gather_cells(const GridFunction& f, const DyadicCube& q,
                  std::vector<double>& out) {
  out.clear();
  out.reserve(f.grid().cube_cell_count(q));
  f.grid().for_each_cell(q, [&](std::size_t c) { out.push_back(f[c]); });
}

double luxemburg_norm(const GridFunction& g, const DyadicCube& q,
                      const YoungFunction& phi) {
  g.grid().require_valid(q);
  std::vector<double> vals;
  gather_cells(g, q, vals);
  return norm_core(vals, {}, phi, 1e-10);
}

double luxemburg_norm_weighted(const GridFunction& g, const GridFunction& w,
                               const DyadicCube& q, const YoungFunction& phi) {
  g.grid().require_valid(q);
  std::vector<double> vals, wts;
  gather_cells(g, q, vals);
  gather_cells(w, q, wts);
  return norm_core(vals, wts, phi, 1e-10);
}

double inf_form_value_at(std::span<const double> g, std::span<const double> mu,
                         const YoungFunction& eta, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("inf_form: tau must be positive");
  double total = 0.0;
  double acc = 0.0;
  if (mu.empty()) {
    total = static_cast<double>(g.size());
    for (double gi : g) acc += eta(gi / tau);
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      total += mu[i];
      if (mu[i] > 0.0) acc += mu[i] * eta(g[i] / tau);
    }
  }
  if (total <= 0.0) throw std::domain_error("inf_form: zero measure");
  return tau + tau * acc / total;
}

InfFormResult inf_form_norm(std::span<const double> g,
                            std::span<const double> mu,
                            const YoungFunction& eta) {
  bool any = false;
  if (mu.empty()) {
    for (double gi : g)
      if (gi > 0.0) any = true;
  } else {
    for (std::size_t i = 0; i < g.size(); ++i)
      if (mu[i] > 0.0 && g[i] > 0.0) any = true;
  }
  if (!any) return InfFormResult{0.0, 0.0};

  // Coarse scan, then golden-section inside the bracketing interval.
  const int kScan = 241;
  const double llo = std::log(1e-12), lhi = std::log(1e12);
  double best = kEvalCap, best_lt = llo;
  for (int i = 0; i < kScan; ++i) {
    const double lt = llo + (lhi - llo) * i / (kScan - 1);
    const double v = inf_form_value_at(g, mu, eta, std::exp(lt));
    if (v < best) {
      best = v;
      best_lt = lt;
    }
  }
  const double step = (lhi - llo) / (kScan - 1);
  double a = best_lt - step, b = best_lt + step;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = inf_form_value_at(g, mu, eta, std::exp(c));
  double fd = inf_form_value_at(g, mu, eta, std::exp(d));
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = inf_form_value_at(g, mu, eta, std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = inf_form_value_at(g, mu, eta, std::exp(d));
    }
  }
  const double tau = std::exp(0.5 * (a + b));
  return InfFormResult{inf_form_value_at(g, mu, eta, tau), tau};
}

InfFormResult inf_form_norm_weighted(const GridFunction& g,
                                     const GridFunction& w,
                                     const DyadicCube& q,
                                     const YoungFunction& eta) {
  std::vector<double> vals, wts;
  gather_cells(g, q, vals);
  gather_cells(w, q, wts);
  return inf_form_norm(vals, wts, eta);
}

double inf_form_value_at_weighted(const GridFunction& g, const GridFunction& w,
                                  const DyadicCube& q,
                                  const YoungFunction& eta, double tau) {
  std::vector<double> vals, wts;
  gather_cells(g, q, vals);
  gather_cells(w, q, wts);
  return inf_form_value_at(vals, wts, eta, tau);
}

double holder_equivalence_factor(const YoungFunction& eta,
                                 const YoungFunction& eta_tilde) {
  // f g = eta^{-1}(u) eta~^{-1}(w) <= eta^{-1}(u+w) eta~^{-1}(u+w)
  //     <= K (u+w) with K the lattice sup below, so the mean of fg against
  // any probability measure is at most 2K once both norms are 1.
  double k_sup = 1.0;
  for (int i = 0; i <= 240; ++i) {
    const double t = std::exp(std::log(1e-10) +
                              (std::log(1e10) - std::log(1e-10)) * i / 240.0);
    double a, b;
    try {
      a = eta.inverse(t);
      b = eta_tilde.inverse(t);
    } catch (const std::exception&) {
      return kEvalCap;
    }
    const double ratio = a * b / t;
    if (!std::isfinite(ratio) || ratio >= kEvalCap) return kEvalCap;
    k_sup = std::max(k_sup, ratio);
  }
  const double c = 2.0 * k_sup;
  return c >= kEvalCap ? kEvalCap : c;
}

HolderReport check_generalized_holder(const GridFunction& f_part,
                                      const GridFunction& w_k,
                                      const DyadicCube& q,
                                      const YoungFunction& eta,
                                      const YoungFunction& eta_tilde,
                                      const GridFunction& vr) {
  HolderReport rep;
  const DyadicGrid& grid = f_part.grid();
  grid.require_valid(q);

  std::vector<double> fs, ws, vs;
  gather_cells(f_part, q, fs);
  gather_cells(w_k, q, ws);
  gather_cells(vr, q, vs);

  double mu_total = 0.0;
  for (double v : vs) mu_total += v;
  if (mu_total <= 0.0) {
    rep.degenerate = true;
    return rep;
  }

  double lhs_sum = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) lhs_sum += fs[i] * ws[i] * vs[i];
  const double cells = static_cast<double>(fs.size());
  // (1/|Q|) * integral = mean over cells (the cell measure cancels).
  rep.lhs = lhs_sum / cells;

  rep.norm_f = luxemburg_norm(fs, vs, eta);
  rep.norm_w = luxemburg_norm(ws, vs, eta_tilde);
  rep.rhs = (mu_total / cells) * rep.norm_f * rep.norm_w;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs > 0.0 ? kEvalCap : 0.0);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-300;
  return rep;
}

}  // namespace olab
