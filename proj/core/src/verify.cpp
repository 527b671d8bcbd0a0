#include "olab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace olab {

namespace {

constexpr double kSlack = 1e-9;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? kEvalCap : 0.0;
}

}  // namespace

void VerificationReport::add(InstanceRecord rec) {
  rec.suite = suite;
  if (!rec.pass) {
    ++violations;
    pass = false;
  }
  if (rec.degenerate) ++degenerate_count;
  if (rec.saturated) ++saturated_count;
  if (!rec.degenerate && rec.ratio > empirical_constant) {
    empirical_constant = rec.ratio;
    worst_index = records.size();
  }
  records.push_back(std::move(rec));
}

void VerificationReport::merge_child(const VerificationReport& child) {
  for (const InstanceRecord& rec : child.records) {
    InstanceRecord copy = rec;
    copy.suite = suite;
    add(std::move(copy));
  }
  for (const auto& [k, v] : child.constants) constants[k] = v;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo))
    throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    out[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  return out;
}

SweepContext make_context(const GridFunction& u, const GridFunction& v,
                          double r, double delta, double a, double aq_cap,
                          double ainf_cap) {
  SweepContext ctx;
  ctx.n = u.grid().dimension();
  ctx.a = a;
  ctx.r = r;
  ctx.delta = delta;
  ctx.tau = tau_dimensional(ctx.n);
  ctx.u_ainf = a_infty_constant(u).value;
  ctx.u_a1 = a1_constant(u).value;

  const GridFunction vr = pointwise_pow(v, r);
  ctx.vr_ainf = a_infty_constant(vr).value;
  ConstantWitness aq;
  ctx.q = choose_a_q(vr, aq_cap, &aq);
  ctx.vr_aq = aq.value;

  // theta and C of the v^r A-infinity display, from the reverse Hoelder
  // lemma applied to v^r.
  ctx.theta = 1.0 / (1.0 + ctx.tau * ctx.vr_ainf);
  ctx.theta_c = 2.0;

  // eps1: largest ladder eps with v^{r+eps} still certified A-infinity.
  ctx.eps1 = 0.0;
  for (double cand : {2.0, 1.0, 0.5, 0.25, 0.125}) {
    const double eps = cand * r;
    const GridFunction vre = pointwise_pow(v, r + eps);
    if (a_infty_constant(vre).value <= ainf_cap) {
      ctx.eps1 = eps;
      break;
    }
  }
  if (ctx.eps1 == 0.0) ctx.eps1 = 0.0625 * r;

  ctx.eps2 = r / ((ctx.q - 1.0) * (1.0 + ctx.tau * ctx.u_ainf));
  ctx.eps0 = std::min(ctx.eps1, ctx.eps2);
  return ctx;
}

// ---------------------------------------------------------------------------
// Reverse Hoelder lemma
// ---------------------------------------------------------------------------

VerificationReport verify_reverse_holder(const GridFunction& w,
                                         std::uint64_t seed,
                                         int subsets_per_cube) {
  VerificationReport rep;
  rep.suite = "reverse_holder";

  const DyadicGrid& grid = w.grid();
  const ConstantWitness ainf = a_infty_constant(w);
  const double tau = tau_dimensional(grid.dimension());
  const double r_w = 1.0 + 1.0 / (tau * ainf.value);
  const double eps_w = 1.0 / (1.0 + tau * ainf.value);
  rep.constants["ainf"] = ainf.value;
  rep.constants["tau_n"] = tau;
  rep.constants["r_w"] = r_w;
  rep.constants["eps_w"] = eps_w;

  const double m = grid.cell_measure();
  std::vector<double> terms(w.size()), rw_terms(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    terms[i] = w[i] * m;
    rw_terms[i] = std::pow(w[i], r_w) * m;
  }
  const CubeSums sums(grid, terms);
  const CubeSums rw_sums(grid, rw_terms);

  for (int j = 0; j <= grid.max_level(); ++j) {
    const std::size_t count = grid.level_cube_count(j);
    for (std::size_t i = 0; i < count; ++i) {
      const DyadicCube q = grid.cube_at(j, i);
      const double avg = sums.average(q);

      InstanceRecord rec;
      rec.instance_id = "rw_average";
      rec.witness = to_string(q);
      rec.lhs = std::pow(rw_sums.average(q), 1.0 / r_w);
      rec.rhs = 2.0 * avg;
      rec.ratio = safe_ratio(rec.lhs, rec.rhs);
      rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
      rep.add(std::move(rec));

      // Subset display: w(E)/w(Q) <= 2 (|E|/|Q|)^{eps_w} over random
      // nonempty cell subsets. One record per cube: its worst draw.
      std::vector<std::size_t> cells;
      cells.reserve(grid.cube_cell_count(q));
      grid.for_each_cell(q, [&](std::size_t c) { cells.push_back(c); });
      const double wq = sums.sum(q);

      std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * (j + 1) + i));
      std::uniform_real_distribution<double> unif(0.0, 1.0);

      InstanceRecord worst;
      worst.instance_id = "rw_subset";
      worst.k = j;
      worst.ratio = -1.0;
      const int draws = cells.size() == 1 ? 1 : subsets_per_cube;
      for (int d = 0; d < draws; ++d) {
        const double p = unif(rng);
        double we = 0.0;
        std::size_t picked = 0;
        for (std::size_t c : cells) {
          if (unif(rng) < p) {
            we += w[c] * m;
            ++picked;
          }
        }
        if (picked == 0) {
          const std::size_t c = cells[static_cast<std::size_t>(unif(rng) * cells.size()) % cells.size()];
          we = w[c] * m;
          picked = 1;
        }
        const double frac = static_cast<double>(picked) / cells.size();
        const double lhs = we / wq;
        const double rhs = 2.0 * std::pow(frac, eps_w);
        const double ratio = safe_ratio(lhs, rhs);
        if (ratio > worst.ratio) {
          worst.lhs = lhs;
          worst.rhs = rhs;
          worst.ratio = ratio;
          worst.witness = to_string(q) + "|E|=" + std::to_string(picked);
        }
      }
      worst.pass = worst.lhs <= worst.rhs * (1.0 + kSlack);
      rep.add(std::move(worst));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Level-set lemma
// ---------------------------------------------------------------------------

VerificationReport verify_level_set_lemma(const GridFunction& u,
                                          const GridFunction& v,
                                          const SweepContext& ctx,
                                          const CZDecomposition& d) {
  if (!d.classified)
    throw std::logic_error("verify_level_set_lemma: decomposition not classified");
  VerificationReport rep;
  rep.suite = "level_set";

  const DyadicGrid& grid = u.grid();
  const double denom = (ctx.q - 1.0) * (1.0 + ctx.tau * ctx.u_ainf);
  const double c1 = 2.0 * std::pow(ctx.vr_aq * std::pow(ctx.a, ctx.r), 1.0 / denom);
  const double c2 = std::log(ctx.a) / denom;
  rep.constants["c1"] = c1;
  rep.constants["c2"] = c2;
  rep.constants["q"] = ctx.q;
  rep.constants["vr_aq"] = ctx.vr_aq;
  rep.constants["u_ainf"] = ctx.u_ainf;

  const CubeSums u_sums = CubeSums::integrals(u);
  const double m = grid.cell_measure();
  (void)v;

  for (const CZLevel& lev : d.levels) {
    if (!lev.defined) continue;
    for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
      const int l = lev.ell[j];
      if (l < 0 || !lev.in_gamma[j]) continue;
      const DyadicCube& q = lev.cubes[j];

      double u_ek = 0.0;
      std::size_t ek_cells = 0;
      grid.for_each_cell(q, [&](std::size_t c) {
        if (lev.ek_mask[c]) {
          u_ek += u[c] * m;
          ++ek_cells;
        }
      });
      const double uq = u_sums.sum(q);

      InstanceRecord rec;
      rec.instance_id = "lemma_display";
      rec.k = lev.k;
      rec.ell = l;
      rec.witness = to_string(q);
      rec.lhs = u_ek;
      rec.rhs = c1 * std::exp(-c2 * ctx.r * l) * uq;
      rec.ratio = safe_ratio(rec.lhs, rec.rhs);
      rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
      rep.add(std::move(rec));

      // Intermediate chain step of the proof.
      const double frac =
          static_cast<double>(ek_cells) / static_cast<double>(grid.cube_cell_count(q));
      InstanceRecord chain;
      chain.instance_id = "lemma_chain";
      chain.k = lev.k;
      chain.ell = l;
      chain.witness = to_string(q);
      chain.lhs = std::pow(frac, ctx.q - 1.0);
      chain.rhs = ctx.vr_aq * std::pow(ctx.a, (1.0 - l) * ctx.r);
      chain.ratio = safe_ratio(chain.lhs, chain.rhs);
      chain.pass = chain.lhs <= chain.rhs * (1.0 + kSlack);
      rep.add(std::move(chain));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Claims 1 and 3
// ---------------------------------------------------------------------------

namespace {

struct ClaimScratch {
  std::vector<double> g;    // f*v on the cube
  std::vector<double> f;    // f on the cube
  std::vector<double> vv;   // v on the cube
  std::vector<double> vr;   // v^r on the cube
  std::vector<double> gA;   // g restricted to A
  std::vector<double> gB;   // g restricted to B
  std::vector<double> wk;   // (log(v/a^k))^delta on B
  std::vector<double> phif; // Phi(f)
};

// Shared chain evaluation for Claims 1 and 3. minus_one selects the l-free
// (Lambda_{-1,k}) variant.
void check_claim_cube(VerificationReport& rep, const GridFunction& f,
                      const GridFunction& v, const YoungFunction& phi,
                      const YoungFunction& eta, const YoungFunction* eta_tilde,
                      const YoungFunction& psi, double eps, double c_h,
                      const SweepContext& ctx, const DyadicCube& q, int k,
                      int ell, double cube_norm_value, double rh_s,
                      bool minus_one, ClaimScratch& scratch) {
  const double a = ctx.a;
  const double r = ctx.r;
  const double delta = ctx.delta;
  const double ak = std::pow(a, k);
  const double akr = std::pow(a, k * r);
  const double tstar = phi.growth_tstar;
  const double c0 = phi.growth_c0;
  const double s = 1.0 + eps / r;
  const double phi2c0 = phi(2.0) * c0;
  const std::string cube_str = to_string(q);

  auto& sc = scratch;
  gather_cells(pointwise_product(f, v), q, sc.g);
  gather_cells(f, q, sc.f);
  gather_cells(v, q, sc.vv);
  const std::size_t cells = sc.g.size();
  sc.vr.resize(cells);
  sc.phif.resize(cells);
  bool saturated = false;
  for (std::size_t i = 0; i < cells; ++i) {
    sc.vr[i] = std::pow(sc.vv[i], r);
    sc.phif[i] = phi(sc.f[i]);
    if (is_saturated(sc.phif[i])) saturated = true;
  }

  double vr_sum = 0.0;
  for (double x : sc.vr) vr_sum += x;
  const double vr_avg = vr_sum / cells;  // (1/|Q|) integral of v^r

  // mean over the cube of Psi_eps(f) v^r == (1/|Q|) integral.
  double psi_mean = 0.0, phif_vr_mean = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double pv = psi(sc.f[i]);
    if (is_saturated(pv)) saturated = true;
    psi_mean += pv * sc.vr[i];
    phif_vr_mean += sc.phif[i] * sc.vr[i];
  }
  psi_mean /= cells;
  phif_vr_mean /= cells;

  // Case split A = {v <= t* a^k}, B = Q \ A.
  sc.gA.assign(cells, 0.0);
  sc.gB.assign(cells, 0.0);
  sc.wk.assign(cells, 0.0);
  bool b_nonempty = false;
  for (std::size_t i = 0; i < cells; ++i) {
    if (sc.vv[i] <= tstar * ak) {
      sc.gA[i] = sc.g[i];
    } else {
      sc.gB[i] = sc.g[i];
      sc.wk[i] = std::pow(std::log(sc.vv[i] / ak), delta);
      b_nonempty = true;
    }
  }
  const double I = luxemburg_norm(sc.gA, phi) / ak;
  const double II = luxemburg_norm(sc.gB, phi) / ak;

  {
    InstanceRecord rec;
    rec.instance_id = "triangle";
    rec.k = k;
    rec.ell = ell;
    rec.witness = cube_str;
    rec.lhs = cube_norm_value / ak;
    rec.rhs = I + II;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
    rec.saturated = saturated;
    rep.add(std::move(rec));
  }

  bool branch_i = I > 0.5;
  bool branch_ii = II > 0.5;
  const bool borderline = !branch_i && !branch_ii;
  if (borderline) branch_i = branch_ii = true;

  const double ci_derived =
      std::pow(2.0, r) * c0 * std::pow(std::log(2.0 * tstar), delta);
  const double ci_literal =
      minus_one ? c0 * std::pow(std::log(2.0 * tstar), delta) : ci_derived;

  if (branch_i) {
    InstanceRecord rec;
    rec.instance_id = "branch_I";
    rec.k = k;
    rec.ell = ell;
    rec.witness = cube_str;
    rec.lhs = akr;
    rec.rhs = ci_derived * phif_vr_mean;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
    rec.saturated = saturated;
    if (borderline) rec.note = "borderline-branch";
    rep.add(std::move(rec));
  }

  // Assembled constant for the final display; the Hoelder pairing carries
  // the tracked equivalence factor c_h of the exact eta~ normalization.
  double chain_const;
  const double ee = std::exp(std::exp(1.0 / (1.0 - eps)));
  const double rh_pow = std::pow(rh_s, s);
  const double big_d = ee + rh_pow;
  if (delta == 0.0) {
    chain_const = phi2c0;
  } else if (minus_one) {
    chain_const =
        2.0 * phi2c0 * c_h * big_d *
        std::pow(1.0 + std::log(2.0 * phi2c0 * c_h * big_d), delta / eps);
  } else {
    chain_const = 2.0 * phi2c0 * c_h * big_d * std::pow(a, eps) *
                  std::pow(1.0 + std::log(2.0 * phi2c0 * c_h * big_d) +
                               2.0 * (r + eps) * std::log(a),
                           delta / eps);
  }
  if (!(chain_const < kEvalCap)) chain_const = kEvalCap;

  if (branch_ii && b_nonempty) {
    // Pre-Hoelder display.
    double pre = 0.0;
    for (std::size_t i = 0; i < cells; ++i)
      pre += sc.phif[i] * sc.vr[i] * sc.wk[i];
    pre /= cells;
    {
      InstanceRecord rec;
      rec.instance_id = "branch_II_pre_holder";
      rec.k = k;
      rec.ell = ell;
      rec.witness = cube_str;
      rec.lhs = akr;
      rec.rhs = phi2c0 * pre;
      rec.ratio = safe_ratio(rec.lhs, rec.rhs);
      rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
      rec.saturated = saturated;
      if (borderline) rec.note = "borderline-branch";
      rep.add(std::move(rec));
    }

    if (delta > 0.0 && eta_tilde != nullptr) {
      // Generalized Hoelder with respect to v^r dx, gated on the provable
      // display with the tracked factor; the literal constant-1 ratio is
      // kept in the note.
      const double norm_f = luxemburg_norm(sc.phif, sc.vr, eta);
      const double norm_w = luxemburg_norm(sc.wk, sc.vr, *eta_tilde);
      {
        InstanceRecord rec;
        rec.instance_id = "holder";
        rec.k = k;
        rec.ell = ell;
        rec.witness = cube_str;
        rec.lhs = pre;
        rec.rhs = c_h * vr_avg * norm_f * norm_w;
        rec.ratio = safe_ratio(rec.lhs, rec.rhs);
        rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack) + 1e-300;
        rec.saturated = saturated || is_saturated(c_h);
        rec.note = "literal_ratio=" +
                   fmt(safe_ratio(pre, vr_avg * norm_f * norm_w));
        rep.add(std::move(rec));
      }

      // eta~ norm bound and its chain pieces.
      const double lfac = minus_one ? 1.0 : std::pow(a, (ell + 1.0) * eps);
      {
        InstanceRecord rec;
        rec.instance_id = "wk_norm_bound";
        rec.k = k;
        rec.ell = ell;
        rec.witness = cube_str;
        rec.lhs = norm_w;
        rec.rhs = big_d * lfac;
        rec.ratio = safe_ratio(rec.lhs, rec.rhs);
        rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
        rep.add(std::move(rec));
      }
      {
        // eta~(eps^{delta/(eps-1)}) <= e^{e^{1/(1-eps)}}.
        InstanceRecord rec;
        rec.instance_id = "wk_arith";
        rec.k = k;
        rec.ell = ell;
        rec.witness = "eps=" + fmt(eps);
        rec.lhs = (*eta_tilde)(std::pow(eps, delta / (eps - 1.0)));
        rec.rhs = ee;
        rec.ratio = safe_ratio(rec.lhs, rec.rhs);
        rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
        rep.add(std::move(rec));
      }
      if (vr_sum > 0.0) {
        // Mean split of eta~(w_k) at the cutoff v/a^k > e^{eps^{1/(eps-1)}}.
        const double cutoff = std::exp(std::pow(eps, 1.0 / (eps - 1.0)));
        double mean_eta = 0.0, tail = 0.0, full_tail = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
          mean_eta += (*eta_tilde)(sc.wk[i]) * sc.vr[i];
          const double ve = std::pow(sc.vv[i], r + eps);
          full_tail += ve;
          if (sc.vv[i] / ak > cutoff) tail += ve;
        }
        mean_eta /= vr_sum;
        tail /= vr_sum;
        full_tail /= vr_sum;
        const double a_keps = std::pow(a, -k * eps);
        {
          InstanceRecord rec;
          rec.instance_id = "wk_mean_split";
          rec.k = k;
          rec.ell = ell;
          rec.witness = cube_str;
          rec.lhs = mean_eta;
          rec.rhs = (*eta_tilde)(std::pow(eps, delta / (eps - 1.0))) + a_keps * tail;
          rec.ratio = safe_ratio(rec.lhs, rec.rhs);
          rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack) + 1e-300;
          rep.add(std::move(rec));
        }
        {
          // RH step: (1/v^r(Q)) int v^{r+eps} <= RH^s (avg v^r)^{s-1}.
          InstanceRecord rec;
          rec.instance_id = "rh_step";
          rec.k = k;
          rec.ell = ell;
          rec.witness = cube_str;
          rec.lhs = full_tail;
          rec.rhs = rh_pow * std::pow(vr_avg, s - 1.0);
          rec.ratio = safe_ratio(rec.lhs, rec.rhs);
          rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
          rep.add(std::move(rec));
        }
        {
          // Lambda band: (avg v^r)^{s-1} <= a^{(k+l+1)eps} (or a^{k eps}).
          InstanceRecord rec;
          rec.instance_id = "band_step";
          rec.k = k;
          rec.ell = ell;
          rec.witness = cube_str;
          rec.lhs = std::pow(vr_avg, s - 1.0);
          rec.rhs = minus_one ? std::pow(a, k * eps)
                              : std::pow(a, (k + ell + 1.0) * eps);
          rec.ratio = safe_ratio(rec.lhs, rec.rhs);
          rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
          rep.add(std::move(rec));
        }
      }

      // tau step: the norm is dominated by the Amemiya value at any tau.
      const double tau_paper =
          minus_one ? 1.0 / (2.0 * big_d)
                    : 1.0 / (2.0 * std::pow(a, (ell + 1.0) * (r + eps)) * big_d);
      const double tau_star = tau_paper / (phi2c0 * c_h);
      const double f_paper =
          inf_form_value_at(sc.phif, sc.vr, eta, tau_paper);
      const double f_star = inf_form_value_at(sc.phif, sc.vr, eta, tau_star);
      {
        InstanceRecord rec;
        rec.instance_id = "tau_amemiya";
        rec.k = k;
        rec.ell = ell;
        rec.witness = "tau=" + fmt(tau_star);
        rec.lhs = norm_f;
        rec.rhs = f_star;
        rec.ratio = safe_ratio(rec.lhs, rec.rhs);
        rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
        rec.saturated = is_saturated(f_star);
        rep.add(std::move(rec));
      }
      {
        // Paper display at its tau: (v^r(Q)/|Q|) ||Phi f|| ||w_k|| <=
        // a^{kr}/2 + D lfac tau eta(1/tau) (1/|Q|) int Psi_eps(f) v^r.
        const double eta_fac =
            std::pow(1.0 + std::log(1.0 / tau_paper), delta / eps);
        InstanceRecord rec;
        rec.instance_id = "tau_paper_display";
        rec.k = k;
        rec.ell = ell;
        rec.witness = "tau=" + fmt(tau_paper);
        rec.lhs = vr_avg * norm_f * norm_w;
        rec.rhs = akr / 2.0 + big_d * lfac * eta_fac * psi_mean;
        rec.ratio = safe_ratio(rec.lhs, rec.rhs);
        rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
        rec.saturated = saturated || is_saturated(f_paper) || is_saturated(rec.rhs);
        rep.add(std::move(rec));
      }
      {
        // Submultiplicative step integrated: (tau/|Q|) int eta(Phi f / tau)
        // v^r <= tau eta(1/tau) (1/|Q|) int Psi_eps(f) v^r.
        double lhs_sub = 0.0;
        bool sat = false;
        for (std::size_t i = 0; i < cells; ++i) {
          const double e = eta(sc.phif[i] / tau_star);
          if (is_saturated(e)) sat = true;
          lhs_sub += e * sc.vr[i];
        }
        lhs_sub = tau_star * lhs_sub / cells;
        const double eta_fac =
            std::pow(1.0 + std::log(1.0 / tau_star), delta / eps);
        InstanceRecord rec;
        rec.instance_id = "tau_submult";
        rec.k = k;
        rec.ell = ell;
        rec.witness = "tau=" + fmt(tau_star);
        rec.lhs = lhs_sub;
        rec.rhs = eta_fac * psi_mean;
        rec.ratio = safe_ratio(rec.lhs, rec.rhs);
        rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack) + 1e-300;
        rec.saturated = sat || is_saturated(rec.rhs);
        rep.add(std::move(rec));
      }
      {
        // Absorption half: (v^r(Q)/|Q|) tau* ||w_k||-bound <=
        // a^{kr}/(2 Phi(2) C0 c_h).
        InstanceRecord rec;
        rec.instance_id = "tau_absorb";
        rec.k = k;
        rec.ell = ell;
        rec.witness = "tau=" + fmt(tau_star);
        rec.lhs = vr_avg * tau_star * big_d * lfac;
        rec.rhs = akr / (2.0 * phi2c0 * c_h);
        rec.ratio = safe_ratio(rec.lhs, rec.rhs);
        rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
        rep.add(std::move(rec));
      }
    }
  }

  // Final display with the assembled constant.
  const double ell_factor =
      minus_one || delta == 0.0
          ? 1.0
          : std::pow(std::max(ell, 1), delta / eps) * std::pow(a, ell * eps);
  const double final_const = std::max(ci_derived, chain_const);
  {
    InstanceRecord rec;
    rec.instance_id = "claim_final";
    rec.k = k;
    rec.ell = ell;
    rec.witness = cube_str;
    rec.lhs = akr;
    rec.rhs = final_const * ell_factor * psi_mean;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
    rec.saturated = saturated || is_saturated(rec.rhs);
    rec.note = "C_literal=" + fmt(ci_literal);
    rep.add(std::move(rec));
  }
  {
    // Empirical minimal constant of the claim display (no chain constant).
    InstanceRecord rec;
    rec.instance_id = "claim_empirical";
    rec.k = k;
    rec.ell = ell;
    rec.witness = cube_str;
    rec.lhs = akr;
    rec.rhs = ell_factor * psi_mean;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = true;  // informational: the sup is the empirical constant
    rec.degenerate = !(rec.rhs > 0.0);
    rec.saturated = saturated;
    rep.add(std::move(rec));
  }
}

VerificationReport verify_claim_impl(const GridFunction& f,
                                     const GridFunction& v,
                                     const YoungFunction& phi, double eps,
                                     const SweepContext& ctx,
                                     const CZDecomposition& d, bool minus_one) {
  if (!d.classified)
    throw std::logic_error("verify_claim: decomposition not classified");
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("verify_claim: eps must lie in (0,1)");

  VerificationReport rep;
  rep.suite = minus_one ? "claim3" : "claim1";

  const double s = 1.0 + eps / ctx.r;
  const GridFunction vr = pointwise_pow(v, ctx.r);
  const double rh_s = rh_constant(vr, s).value;
  rep.constants["eps"] = eps;
  rep.constants["s"] = s;
  rep.constants["rh_s"] = rh_s;
  rep.constants["eps0"] = ctx.eps0;

  const YoungFunction eta = make_eta_eps(ctx.delta, eps);
  const YoungFunction psi = make_psi_eps(phi, ctx.delta, eps);
  YoungFunction eta_tilde;
  const bool have_tilde = ctx.delta > 0.0;
  double c_h = 1.0;
  if (have_tilde) {
    eta_tilde = make_eta_tilde_eps(ctx.delta, eps);
    c_h = holder_equivalence_factor(eta, eta_tilde);
  }
  rep.constants["holder_factor"] = c_h;

  ClaimScratch scratch;
  for (const CZLevel& lev : d.levels) {
    if (!lev.defined) continue;
    for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
      const int l = lev.ell[j];
      if (minus_one) {
        if (l != -1) continue;
      } else {
        if (l < 0 || !lev.in_gamma[j]) continue;
      }
      check_claim_cube(rep, f, v, phi, eta,
                       have_tilde ? &eta_tilde : nullptr, psi, eps, c_h, ctx,
                       lev.cubes[j], lev.k, l, lev.norm[j], rh_s, minus_one,
                       scratch);
    }
  }
  return rep;
}

}  // namespace

VerificationReport verify_claim1(const GridFunction& f, const GridFunction& v,
                                 const YoungFunction& phi, double eps,
                                 const SweepContext& ctx,
                                 const CZDecomposition& d) {
  return verify_claim_impl(f, v, phi, eps, ctx, d, false);
}

VerificationReport verify_claim3(const GridFunction& f, const GridFunction& v,
                                 const YoungFunction& phi, double eps,
                                 const SweepContext& ctx,
                                 const CZDecomposition& d) {
  return verify_claim_impl(f, v, phi, eps, ctx, d, true);
}

// ---------------------------------------------------------------------------
// Theorem 1
// ---------------------------------------------------------------------------

namespace {

// A_N / B_N bookkeeping on the finite decomposition.
void theorem1_an_bn(VerificationReport& rep, const GridFunction& u,
                    const GridFunction& v, const GridFunction& f,
                    const YoungFunction& phi, double eps,
                    const SweepContext& ctx) {
  const DyadicGrid& grid = u.grid();
  const double a = ctx.a;
  const double r = ctx.r;
  const double m = grid.cell_measure();

  const GridFunction g = pointwise_product(f, v);
  const auto [k_lo, k_hi] = default_k_range(g, phi, v, a);
  CZDecomposition d = decompose(g, phi, a, k_lo, k_hi);
  classify(d, v, r);
  secondary_decompose(d, v, r);

  const GridFunction vr = pointwise_pow(v, r);
  const GridFunction uvr = pointwise_product(u, vr);
  const CubeSums u_sums = CubeSums::integrals(u);
  const CubeSums uvr_sums = CubeSums::integrals(uvr);

  const YoungFunction psi = make_psi_eps(phi, ctx.delta, eps);

  // E_k partition: sum over k of uv^r(E_k) must equal uv^r({Mg/v > 1}).
  double ek_total = 0.0;
  int undefined_nonempty = 0;
  for (const CZLevel& lev : d.levels) {
    if (!lev.defined) {
      // E_k can only be nonempty where v sits in this band and Mg > v.
      bool nonempty = false;
      for (std::size_t c = 0; c < v.size(); ++c)
        if (band_index(a, v[c]) == lev.k && d.mg[c] > v[c]) nonempty = true;
      if (nonempty) ++undefined_nonempty;
      continue;
    }
    for (std::size_t c = 0; c < v.size(); ++c)
      if (lev.ek_mask[c]) ek_total += uvr[c] * m;
  }
  double direct_total = 0.0;
  for (std::size_t c = 0; c < v.size(); ++c)
    if (d.mg[c] > v[c]) direct_total += uvr[c] * m;
  {
    InstanceRecord rec;
    rec.instance_id = "ek_partition";
    rec.witness = "sum_k";
    rec.lhs = ek_total;
    rec.rhs = direct_total;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = std::abs(rec.lhs - rec.rhs) <=
               kSlack * std::max({1.0, rec.lhs, rec.rhs});
    rec.degenerate = undefined_nonempty > 0;
    if (undefined_nonempty > 0)
      rec.note = "undefined_levels_with_mass=" + std::to_string(undefined_nonempty);
    rep.add(std::move(rec));
  }

  // Per-k splitting and the A/B contributions.
  double an_total = 0.0, bn_total = 0.0;
  int stabilization_k = d.k_max + 1;
  for (auto it = d.levels.rbegin(); it != d.levels.rend(); ++it) {
    const CZLevel& lev = *it;
    if (!lev.defined) continue;
    const int k = lev.k;
    const double akr1 = std::pow(a, (k + 1.0) * r);

    double uvr_ek = 0.0;
    for (std::size_t c = 0; c < v.size(); ++c)
      if (lev.ek_mask[c]) uvr_ek += uvr[c] * m;

    double contrib_a = 0.0;
    for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
      if (lev.ell[j] < 0 || !lev.in_gamma[j]) continue;
      double u_ek = 0.0;
      grid.for_each_cell(lev.cubes[j], [&](std::size_t c) {
        if (lev.ek_mask[c]) u_ek += u[c] * m;
      });
      contrib_a += akr1 * u_ek;
    }
    double contrib_b = 0.0;
    for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
      if (lev.ell[j] != -1) continue;
      for (std::size_t i = 0; i < lev.secondary[j].size(); ++i) {
        if (!lev.secondary_in_gamma[j][i]) continue;
        contrib_b += akr1 * u_sums.sum(lev.secondary[j][i]);
      }
    }
    an_total += contrib_a;
    bn_total += contrib_b;
    if (contrib_a + contrib_b > 0.0 || uvr_ek > 0.0) stabilization_k = k;

    InstanceRecord rec;
    rec.instance_id = "splitting";
    rec.k = k;
    rec.witness = "k=" + std::to_string(k);
    rec.lhs = uvr_ek;
    rec.rhs = contrib_a + contrib_b;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack) + 1e-300;
    rec.degenerate = rec.lhs == 0.0 && rec.rhs == 0.0;
    rep.add(std::move(rec));
  }
  rep.constants["A_N"] = an_total;
  rep.constants["B_N"] = bn_total;
  rep.constants["stabilization_k"] = stabilization_k;

  // Integral the claims bound everything by.
  double psi_uvr = 0.0;
  bool saturated = false;
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double pv = psi(f[c]);
    if (is_saturated(pv)) saturated = true;
    psi_uvr += pv * uvr[c] * m;
  }
  {
    InstanceRecord rec;
    rec.instance_id = "an_final";
    rec.witness = "A_N";
    rec.lhs = an_total;
    rec.rhs = psi_uvr;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = true;  // empirical constant, recorded
    rec.degenerate = !(rec.rhs > 0.0);
    rec.saturated = saturated;
    rep.add(std::move(rec));
  }
  {
    InstanceRecord rec;
    rec.instance_id = "bn_final";
    rec.witness = "B_N";
    rec.lhs = bn_total;
    rec.rhs = psi_uvr;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = true;
    rec.degenerate = !(rec.rhs > 0.0);
    rec.saturated = saturated;
    rep.add(std::move(rec));
  }

  // Principal-cube machinery per l (mode ell) and for the secondary family
  // (mode minus_one, beta = theta/2).
  std::map<int, std::vector<TaggedCube>> delta_ell;
  std::vector<TaggedCube> delta_minus;
  for (const CZLevel& lev : d.levels) {
    if (!lev.defined) continue;
    for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
      if (lev.ell[j] >= 0 && lev.in_gamma[j])
        delta_ell[lev.ell[j]].push_back(TaggedCube{lev.cubes[j], lev.k});
      if (lev.ell[j] == -1)
        for (std::size_t i = 0; i < lev.secondary[j].size(); ++i)
          if (lev.secondary_in_gamma[j][i])
            delta_minus.push_back(TaggedCube{lev.secondary[j][i], lev.k});
    }
  }

  const double denom = (ctx.q - 1.0) * (1.0 + ctx.tau * ctx.u_ainf);
  const double c1 = 2.0 * std::pow(ctx.vr_aq * std::pow(a, r), 1.0 / denom);
  const double c2 = std::log(a) / denom;

  double an_chain_rhs = 0.0;
  for (const auto& [l, family] : delta_ell) {
    PrincipalCubes pc = build_principal(family, u, PrincipalParams{PrincipalMode::ell});
    double s1 = 0.0;  // sum over Gamma_{l,k} of avg v^r(Q) u(Q)
    for (const TaggedCube& tc : family)
      s1 += d.vr_sums->average(tc.cube) * u_sums.sum(tc.cube);
    double s4 = 0.0;  // sum over principal cubes of avg u(Q) v^r(Q)
    for (const TaggedCube& tc : pc.all)
      s4 += u_sums.average(tc.cube) * d.vr_sums->sum(tc.cube);
    an_chain_rhs += c1 * std::exp(-c2 * l * r) * std::pow(a, (1.0 - l) * r) * s1;

    InstanceRecord rec;
    rec.instance_id = "an_principal_surrogate";
    rec.ell = l;
    rec.witness = "l=" + std::to_string(l);
    rec.lhs = s1;
    rec.rhs = s4;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = true;  // bounded-overlap surrogate: constant recorded
    rec.degenerate = !(rec.rhs > 0.0);
    rep.add(std::move(rec));

    const PrincipalSum ps = principal_sum(pc, u);
    rep.constants["h1_over_u(l=" + std::to_string(l) + ")"] = ps.c;
  }
  {
    InstanceRecord rec;
    rec.instance_id = "an_levelset_chain";
    rec.witness = "A_N";
    rec.lhs = an_total;
    rec.rhs = an_chain_rhs;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack) + 1e-300;
    rec.degenerate = rec.lhs == 0.0 && rec.rhs == 0.0;
    rep.add(std::move(rec));
  }

  if (!delta_minus.empty()) {
    const double beta = ctx.theta / 2.0;
    PrincipalCubes pc = build_principal(
        delta_minus, u, PrincipalParams{PrincipalMode::minus_one, a, r, beta});
    const PrincipalSum ps = principal_sum(pc, u);
    rep.constants["h2_over_u"] = ps.c;
    rep.constants["beta"] = beta;

    // B_N <= a^r sum avg v^r(Q_{j,i}) u(Q_{j,i}) via the secondary sandwich.
    double s1 = 0.0;
    for (const TaggedCube& tc : delta_minus)
      s1 += d.vr_sums->average(tc.cube) * u_sums.sum(tc.cube);
    {
      InstanceRecord rec;
      rec.instance_id = "bn_sandwich_chain";
      rec.witness = "B_N";
      rec.lhs = bn_total;
      rec.rhs = std::pow(a, r) * s1;
      rec.ratio = safe_ratio(rec.lhs, rec.rhs);
      rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack) + 1e-300;
      rec.degenerate = rec.lhs == 0.0 && rec.rhs == 0.0;
      rep.add(std::move(rec));
    }

    // Per (principal cube, k): measure packing and the A-infinity step.
    const double two_n = std::ldexp(1.0, grid.dimension());
    for (std::size_t p = 0; p < pc.all.size(); ++p) {
      const TaggedCube& prin = pc.all[p];
      std::map<int, std::vector<std::size_t>> members;
      for (std::size_t i = 0; i < delta_minus.size(); ++i)
        if (pc.assignment[i] == p) members[delta_minus[i].k].push_back(i);
      for (const auto& [k, idxs] : members) {
        double size_sum = 0.0, vr_sum_k = 0.0;
        for (std::size_t i : idxs) {
          size_sum += grid.measure(delta_minus[i].cube);
          vr_sum_k += d.vr_sums->sum(delta_minus[i].cube);
        }
        const double q_measure = grid.measure(prin.cube);
        const double vr_prin = d.vr_sums->sum(prin.cube);
        {
          InstanceRecord rec;
          rec.instance_id = "bn_packing";
          rec.k = k;
          rec.witness = to_string(prin.cube);
          rec.lhs = size_sum;
          rec.rhs = std::min(std::pow(a, -k * r) * vr_sum_k,
                             std::min(std::pow(a, -k * r) * vr_prin,
                                      two_n * std::pow(a, (prin.k - k) * r) * q_measure));
          rec.ratio = safe_ratio(rec.lhs, rec.rhs);
          rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
          rep.add(std::move(rec));
        }
        {
          InstanceRecord rec;
          rec.instance_id = "bn_ainfty_step";
          rec.k = k;
          rec.witness = to_string(prin.cube);
          rec.lhs = std::pow(a, (k - prin.k) * beta * r) * vr_sum_k;
          rec.rhs = ctx.theta_c * vr_prin *
                    std::pow(two_n * std::pow(a, (prin.k - k) * r), ctx.theta) *
                    std::pow(a, (k - prin.k) * beta * r);
          rec.ratio = safe_ratio(rec.lhs, rec.rhs);
          rec.pass = rec.lhs <= rec.rhs * (1.0 + kSlack);
          rep.add(std::move(rec));
        }
      }
    }
  }
  (void)uvr_sums;
}

}  // namespace

VerificationReport verify_theorem1(const GridFunction& u,
                                   const GridFunction& v,
                                   const GridFunction& f,
                                   const YoungFunction& phi,
                                   const std::vector<double>& eps_ladder,
                                   const TGrid& t_grid, const SweepContext& ctx,
                                   bool with_an_bn) {
  VerificationReport rep;
  rep.suite = "theorem1";
  rep.constants["eps0"] = ctx.eps0;
  rep.constants["eps1"] = ctx.eps1;
  rep.constants["eps2"] = ctx.eps2;

  const DyadicGrid& grid = u.grid();
  const double m = grid.cell_measure();
  const GridFunction vr = pointwise_pow(v, ctx.r);
  const GridFunction uvr = pointwise_product(u, vr);
  const GridFunction g = pointwise_product(f, v);
  const MaximalResult mg = m_phi_dyadic(g, phi);

  const std::vector<double> ts = t_grid.points();
  for (double eps : eps_ladder) {
    const YoungFunction psi = make_psi_eps(phi, ctx.delta, eps);
    double sup_ratio = 0.0;
    for (double t : ts) {
      double lhs = 0.0, rhs = 0.0;
      bool saturated = false;
      for (std::size_t c = 0; c < u.size(); ++c) {
        if (mg.output[c] > t * v[c]) lhs += uvr[c] * m;
        const double pv = psi(f[c] / t);
        if (is_saturated(pv)) saturated = true;
        rhs += pv * uvr[c] * m;
      }
      InstanceRecord rec;
      rec.instance_id = "display eps=" + fmt(eps);
      rec.witness = "t=" + fmt(t);
      rec.lhs = lhs;
      rec.rhs = rhs;
      rec.ratio = safe_ratio(lhs, rhs);
      rec.saturated = saturated;
      rec.degenerate = lhs == 0.0 && rhs == 0.0;
      rec.pass = !(rhs == 0.0 && lhs > 0.0);  // hard violation only
      if (!rec.degenerate) sup_ratio = std::max(sup_ratio, rec.ratio);
      rep.add(std::move(rec));
    }
    rep.constants["C(eps=" + fmt(eps) + ")"] = sup_ratio;
  }

  if (with_an_bn && !eps_ladder.empty())
    theorem1_an_bn(rep, u, v, f, phi, eps_ladder.front(), ctx);
  return rep;
}

// ---------------------------------------------------------------------------
// Corollaries
// ---------------------------------------------------------------------------

VerificationReport verify_corollaries(const GridFunction& u,
                                      const GridFunction& v,
                                      const GridFunction& f,
                                      const YoungFunction& phi,
                                      const YoungFunction& psi, double t0,
                                      double eps, const TGrid& t_grid,
                                      const SweepContext& ctx) {
  VerificationReport rep;
  rep.suite = "corollaries";

  const DyadicGrid& grid = u.grid();
  const double m = grid.cell_measure();
  const GridFunction vr = pointwise_pow(v, ctx.r);
  const GridFunction uvr = pointwise_product(u, vr);
  const GridFunction fv = pointwise_product(f, v);

  const MaximalResult m_fv_phi = m_phi_dyadic(fv, phi);
  const MaximalResult m_v_phi = m_phi_dyadic(v, phi);

  // (i) M_Phi v >= c v.
  double c_low = kEvalCap;
  std::size_t c_cell = 0;
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double ratio = m_v_phi.output[c] / v[c];
    if (ratio < c_low) {
      c_low = ratio;
      c_cell = c;
    }
  }
  rep.constants["m_phi_v_over_v"] = c_low;
  {
    InstanceRecord rec;
    rec.instance_id = "m_phi_v_lower";
    rec.witness = "cell=" + std::to_string(c_cell);
    rec.lhs = 0.0;
    rec.rhs = c_low;
    rec.ratio = c_low;
    rec.pass = c_low > 0.0;
    rep.add(std::move(rec));
  }

  // (ii) Corollary 1 over the t grid.
  const YoungFunction psi_eps = make_psi_eps(phi, ctx.delta, eps);
  const std::vector<double> ts = t_grid.points();
  double sup1 = 0.0;
  for (double t : ts) {
    double lhs = 0.0, rhs = 0.0;
    bool saturated = false;
    for (std::size_t c = 0; c < u.size(); ++c) {
      if (m_fv_phi.output[c] > t * m_v_phi.output[c]) lhs += uvr[c] * m;
      const double pv = psi_eps(f[c] / t);
      if (is_saturated(pv)) saturated = true;
      rhs += pv * uvr[c] * m;
    }
    InstanceRecord rec;
    rec.instance_id = "corollary1";
    rec.witness = "t=" + fmt(t);
    rec.lhs = lhs;
    rec.rhs = rhs;
    rec.ratio = safe_ratio(lhs, rhs);
    rec.saturated = saturated;
    rec.degenerate = lhs == 0.0 && rhs == 0.0;
    rec.pass = !(rhs == 0.0 && lhs > 0.0);
    if (!rec.degenerate) sup1 = std::max(sup1, rec.ratio);
    rep.add(std::move(rec));
  }
  rep.constants["C_corollary1"] = sup1;

  // (iii) Norm equivalence constants A, B over all cubes for g in {fv, v}.
  double eq_a = kEvalCap, eq_b = 0.0;
  for (int j = 0; j <= grid.max_level(); ++j) {
    const std::size_t count = grid.level_cube_count(j);
    for (std::size_t i = 0; i < count; ++i) {
      const DyadicCube q = grid.cube_at(j, i);
      for (const GridFunction* gp : {&fv, &v}) {
        const double n_phi = luxemburg_norm(*gp, q, phi);
        const double n_psi = luxemburg_norm(*gp, q, psi);
        if (n_phi > 0.0 && n_psi > 0.0) {
          const double ratio = n_psi / n_phi;
          eq_a = std::min(eq_a, ratio);
          eq_b = std::max(eq_b, ratio);
        }
      }
    }
  }
  if (!(eq_b > 0.0)) {
    eq_a = 1.0;
    eq_b = 1.0;
  }
  rep.constants["norm_equiv_A"] = eq_a;
  rep.constants["norm_equiv_B"] = eq_b;
  {
    InstanceRecord rec;
    rec.instance_id = "norm_equivalence";
    rec.witness = "all-cubes";
    rec.lhs = eq_a;
    rec.rhs = eq_b;
    rec.ratio = eq_b / eq_a;
    rec.pass = eq_a > 0.0 && std::isfinite(eq_b);
    rep.add(std::move(rec));
  }

  // (iv) Corollary 3 with measured C1, C2.
  const MaximalResult m_fv_psi = m_phi_dyadic(fv, psi);
  const MaximalResult m_v_psi = m_phi_dyadic(v, psi);
  const double c2_used = std::max(2.0 * t0, eq_b / eq_a);
  rep.constants["C2"] = c2_used;
  const YoungFunction eta_psi = make_eta_eps(ctx.delta, eps);
  double sup3 = 0.0;
  for (double t : ts) {
    double lhs = 0.0, rhs = 0.0;
    bool saturated = false;
    for (std::size_t c = 0; c < u.size(); ++c) {
      if (m_fv_psi.output[c] > t * m_v_psi.output[c]) lhs += uvr[c] * m;
      const double pv = eta_psi(psi(c2_used * f[c] / t));
      if (is_saturated(pv)) saturated = true;
      rhs += pv * uvr[c] * m;
    }
    InstanceRecord rec;
    rec.instance_id = "corollary3";
    rec.witness = "t=" + fmt(t);
    rec.lhs = lhs;
    rec.rhs = rhs;
    rec.ratio = safe_ratio(lhs, rhs);
    rec.saturated = saturated;
    rec.degenerate = lhs == 0.0 && rhs == 0.0;
    rec.pass = !(rhs == 0.0 && lhs > 0.0);
    if (!rec.degenerate) sup3 = std::max(sup3, rec.ratio);
    rep.add(std::move(rec));
  }
  rep.constants["C1_corollary3"] = sup3;

  // (v) L-infinity contraction of T_Psi.
  double f_max = 0.0, t_max = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    f_max = std::max(f_max, f[c]);
    t_max = std::max(t_max, m_fv_psi.output[c] / m_v_psi.output[c]);
  }
  {
    InstanceRecord rec;
    rec.instance_id = "t_contraction";
    rec.witness = "sup-norm";
    rec.lhs = t_max;
    rec.rhs = f_max;
    rec.ratio = safe_ratio(t_max, f_max);
    rec.pass = t_max <= f_max * (1.0 + kSlack) + 1e-300;
    rep.add(std::move(rec));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Fractional theorems
// ---------------------------------------------------------------------------

VerificationReport verify_fractional_mid(const GridFunction& u,
                                         const GridFunction& v,
                                         const GridFunction& f, double r,
                                         double delta, double gamma, double p,
                                         const TGrid& t_grid) {
  VerificationReport rep;
  rep.suite = "fractional_mid";

  const DyadicGrid& grid = u.grid();
  const int n = grid.dimension();
  if (!(gamma > 0.0) || !(gamma < static_cast<double>(n) / r))
    throw std::invalid_argument("fractional_mid: gamma outside (0, n/r)");
  if (!(p > r) || !(p < static_cast<double>(n) / gamma))
    throw std::invalid_argument("fractional_mid: p outside (r, n/gamma)");

  const double inv_rp = r > 1.0 ? 1.0 - 1.0 / r : 0.0;  // 1/r'
  const double q = 1.0 / (1.0 / p - gamma / n);
  const double sigma = n * r / (n - r * gamma);
  const double nu = n * delta / (n - r * gamma);
  const double beta = (q / sigma) * (1.0 / p + inv_rp);
  if (!(beta > 1.0))
    throw std::logic_error("fractional_mid: beta must exceed 1");
  rep.constants["q"] = q;
  rep.constants["sigma"] = sigma;
  rep.constants["nu"] = nu;
  rep.constants["beta"] = beta;

  {
    InstanceRecord rec;
    rec.instance_id = "identity_sigma_beta";
    rec.witness = "sigma*beta";
    rec.lhs = sigma * beta;
    rec.rhs = q * (1.0 / p + inv_rp);
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.pass = std::abs(rec.lhs - rec.rhs) <= 1e-12 * std::max(1.0, rec.rhs);
    rep.add(std::move(rec));
  }

  const YoungFunction phi = make_canonical(r, delta);
  const YoungFunction xi = make_xi_piecewise(q / beta, sigma, nu);
  const YoungFunction phi_s = make_phi_small(q, p, inv_rp, n, r, gamma, delta);

  // xi^{-1}(z) z^{gamma/n} <= C Phi^{-1}(z) on the z >= 1 lattice.
  double c_inv = 0.0;
  for (double z : log_spaced(1.0, 1e6, 61)) {
    const double lhs = xi.inverse(z) * std::pow(z, gamma / n);
    const double rhs = phi.inverse(z);
    if (rhs > 0.0) c_inv = std::max(c_inv, lhs / rhs);
  }
  rep.constants["C_xi_inverse"] = c_inv;
  {
    InstanceRecord rec;
    rec.instance_id = "xi_inverse_bound";
    rec.witness = "lattice";
    rec.lhs = c_inv;
    rec.rhs = c_inv;
    rec.ratio = c_inv;
    rec.pass = std::isfinite(c_inv) && c_inv > 0.0;
    rep.add(std::move(rec));
  }

  // Pointwise (M_xi v^beta)^{1/beta} <= C M_phi v.
  const GridFunction v_beta = pointwise_pow(v, beta);
  const MaximalResult m_xi_vb = m_phi_dyadic(v_beta, xi);
  const MaximalResult m_phis_v = m_phi_dyadic(v, phi_s);
  double c_pt = 0.0;
  std::size_t c_cell = 0;
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double lhs = std::pow(m_xi_vb.output[c], 1.0 / beta);
    const double rhs = m_phis_v.output[c];
    const double ratio = safe_ratio(lhs, rhs);
    if (ratio > c_pt) {
      c_pt = ratio;
      c_cell = c;
    }
  }
  rep.constants["C_pointwise_mxi_mphi"] = c_pt;
  {
    InstanceRecord rec;
    rec.instance_id = "pointwise_mxi_mphi";
    rec.witness = "cell=" + std::to_string(c_cell);
    rec.lhs = c_pt;
    rec.rhs = c_pt;
    rec.ratio = c_pt;
    rec.pass = std::isfinite(c_pt);
    rep.add(std::move(rec));
  }

  // Auxiliary pointwise bound with f0 = |f| w v, w = u^{1/q} v^{1/p+1/r'-1}.
  const double m = grid.cell_measure();
  const GridFunction fv = pointwise_product(f, v);
  const MaximalResult m_gf = m_gamma_phi(fv, phi, gamma);
  {
    std::vector<double> w_cells(u.size()), f0(u.size());
    for (std::size_t c = 0; c < u.size(); ++c) {
      w_cells[c] = std::pow(u[c], 1.0 / q) * std::pow(v[c], 1.0 / p + inv_rp - 1.0);
      f0[c] = f[c] * w_cells[c] * v[c];
    }
    double int_f0p = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) int_f0p += std::pow(f0[c], p) * m;
    std::vector<double> inner(u.size());
    for (std::size_t c = 0; c < u.size(); ++c)
      inner[c] = std::pow(f0[c], p * beta / q) / std::pow(w_cells[c], beta);
    const MaximalResult m_xi_inner =
        m_phi_dyadic(GridFunction(grid, std::move(inner)), xi);
    double c_aux = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) {
      const double lhs = m_gf.output[c];
      const double rhs = std::pow(m_xi_inner.output[c], 1.0 / beta) *
                         std::pow(int_f0p, gamma / n);
      if (rhs > 0.0) c_aux = std::max(c_aux, lhs / rhs);
    }
    rep.constants["C_aux_pointwise"] = c_aux;
    InstanceRecord rec;
    rec.instance_id = "aux_pointwise";
    rec.witness = "cells";
    rec.lhs = c_aux;
    rec.rhs = c_aux;
    rec.ratio = c_aux;
    rec.pass = std::isfinite(c_aux);
    rep.add(std::move(rec));
  }

  // Main display over the t grid.
  const double w_exp = q * (1.0 / p + inv_rp);
  const GridFunction uv_w = pointwise_product(u, pointwise_pow(v, w_exp));
  double sup_ratio = 0.0;
  for (double t : t_grid.points()) {
    double lhs_meas = 0.0, rhs_int = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) {
      if (m_gf.output[c] > t * m_phis_v.output[c]) lhs_meas += uv_w[c] * m;
      rhs_int += std::pow(f[c] / t, p) * std::pow(u[c], p / q) *
                 std::pow(v[c], 1.0 + p * inv_rp) * m;
    }
    InstanceRecord rec;
    rec.instance_id = "display";
    rec.witness = "t=" + fmt(t);
    rec.lhs = std::pow(lhs_meas, 1.0 / q);
    rec.rhs = std::pow(rhs_int, 1.0 / p);
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    rec.degenerate = rec.lhs == 0.0 && rec.rhs == 0.0;
    rec.pass = !(rec.rhs == 0.0 && rec.lhs > 0.0);
    if (!rec.degenerate) sup_ratio = std::max(sup_ratio, rec.ratio);
    rep.add(std::move(rec));
  }
  rep.constants["C_display"] = sup_ratio;
  return rep;
}

VerificationReport verify_fractional_diag(const GridFunction& u,
                                          const GridFunction& v,
                                          const GridFunction& f, double r,
                                          double delta, double gamma,
                                          double eps, const TGrid& t_grid) {
  VerificationReport rep;
  rep.suite = "fractional_diag";

  const DyadicGrid& grid = u.grid();
  const int n = grid.dimension();
  if (!(gamma > 0.0) || !(gamma < static_cast<double>(n) / r))
    throw std::invalid_argument("fractional_diag: gamma outside (0, n/r)");
  const double q = 1.0 / (1.0 / r - gamma / n);
  const double nu = delta * q / r;
  rep.constants["q"] = q;
  rep.constants["nu"] = nu;

  const YoungFunction phi = make_canonical(r, delta);
  const YoungFunction xi = make_xi(q, nu);
  const YoungFunction vphi = make_varphi_eps(delta, eps, q, r);
  const YoungFunction psi_frac = make_psi_eps_fractional(r, q, delta, eps);
  const YoungFunction pg_statement =
      make_phi_gamma_eps(r, delta, eps, q, gamma, n, PhiGammaVariant::statement);
  const YoungFunction pg_proof =
      make_phi_gamma_eps(r, delta, eps, q, gamma, n, PhiGammaVariant::proof);

  // The two Phi_{gamma,eps} variants coincide (the statement's extra factor
  // plus Phi's own log power equals the proof exponent); report the spread.
  double variant_spread = 0.0;
  for (double z : log_spaced(1e-3, 1e6, 61)) {
    const double a = pg_statement(z), b = pg_proof(z);
    if (a > 0.0 && b > 0.0)
      variant_spread = std::max(variant_spread, std::abs(a / b - 1.0));
  }
  rep.constants["phi_gamma_variant_spread"] = variant_spread;

  // z^{gamma/n} xi^{-1}(z) <= C Phi^{-1}(z) on the lattice.
  double c_inv = 0.0;
  for (double z : log_spaced(1.0, 1e6, 61)) {
    const double lhs = std::pow(z, gamma / n) * xi.inverse(z);
    const double rhs = phi.inverse(z);
    if (rhs > 0.0) c_inv = std::max(c_inv, lhs / rhs);
  }
  rep.constants["C_xi_inverse"] = c_inv;

  // Chain: Phi_{gamma,eps}(z^{1-q/r}) z^q <= Psi_eps(z) (equality as built).
  for (const auto* pg : {&pg_statement, &pg_proof}) {
    double worst = 0.0;
    double witness_z = 1.0;
    for (double z : log_spaced(1e-4, 1e4, 81)) {
      const double lhs = (*pg)(std::pow(z, 1.0 - q / r)) * std::pow(z, q);
      const double rhs = psi_frac(z);
      const double ratio = safe_ratio(lhs, rhs);
      if (ratio > worst) {
        worst = ratio;
        witness_z = z;
      }
    }
    InstanceRecord rec;
    rec.instance_id = std::string("chain_psi[") + pg->name + "]";
    rec.witness = "z=" + fmt(witness_z);
    rec.lhs = worst;
    rec.rhs = 1.0;
    rec.ratio = worst;
    rec.pass = worst <= 1.0 + kSlack;
    rep.add(std::move(rec));
  }

  // Chain: z Phi_{gamma,eps}(z^{gamma q/(n r)}) <= C varphi_eps(z).
  double c_final = 0.0;
  for (double z : log_spaced(1e-4, 1e6, 81)) {
    const double lhs = z * pg_proof(std::pow(z, gamma * q / (n * r)));
    const double rhs = vphi(z);
    if (rhs > 0.0) c_final = std::max(c_final, lhs / rhs);
  }
  rep.constants["C_final_chain"] = c_final;

  // Chain: (eta_eps o xi)(z^{r/q}) <= C Phi_{gamma,eps}(z).
  const YoungFunction eta_nu = make_eta_eps(nu, eps);
  double c_comp = 0.0;
  for (double z : log_spaced(1e-4, 1e6, 81)) {
    const double lhs = eta_nu(xi(std::pow(z, r / q)));
    const double rhs = pg_proof(z);
    if (rhs > 0.0 && !is_saturated(lhs)) c_comp = std::max(c_comp, lhs / rhs);
  }
  rep.constants["C_eta_xi_comp"] = c_comp;

  // Submultiplicativity of Phi_{gamma,eps}.
  const FamilyCertificate cert = certify_family(pg_proof, r, pg_proof.log_power, 60);
  {
    InstanceRecord rec;
    rec.instance_id = "phi_gamma_submult";
    rec.witness = "lattice";
    rec.lhs = cert.worst_submult_excess;
    rec.rhs = 0.0;
    rec.ratio = cert.worst_submult_excess;
    rec.pass = cert.submultiplicative;
    rep.add(std::move(rec));
  }

  // Main display, both variants.
  const double m = grid.cell_measure();
  const GridFunction fv = pointwise_product(f, v);
  const MaximalResult m_gf = m_gamma_phi(fv, phi, gamma);
  const GridFunction uvq = pointwise_product(u, pointwise_pow(v, q));

  std::vector<double> wv(u.size());
  for (std::size_t c = 0; c < u.size(); ++c)
    wv[c] = std::pow(u[c], 1.0 / q) * v[c];

  for (const auto* pg : {&pg_statement, &pg_proof}) {
    double sup_ratio = 0.0;
    bool any_saturated = false;
    for (double t : t_grid.points()) {
      double lhs = 0.0, arg = 0.0;
      bool saturated = false;
      for (std::size_t c = 0; c < u.size(); ++c) {
        if (m_gf.output[c] > t * v[c]) lhs += uvq[c] * m;
        const double term = (*pg)(f[c] / t) * psi_frac(wv[c]);
        if (is_saturated(term)) saturated = true;
        arg += term * m;
      }
      const double rhs = vphi(arg);
      InstanceRecord rec;
      rec.instance_id = std::string("display[") + pg->name + "]";
      rec.witness = "t=" + fmt(t);
      rec.lhs = lhs;
      rec.rhs = rhs;
      rec.ratio = safe_ratio(lhs, rhs);
      rec.saturated = saturated || is_saturated(rhs);
      rec.degenerate = lhs == 0.0 && rhs == 0.0;
      rec.pass = !(rhs == 0.0 && lhs > 0.0);
      if (!rec.degenerate) sup_ratio = std::max(sup_ratio, rec.ratio);
      any_saturated = any_saturated || rec.saturated;
      rep.add(std::move(rec));
    }
    rep.constants[std::string("C_display[") + pg->name + "]"] = sup_ratio;
    (void)any_saturated;
  }
  return rep;
}

VerificationReport verify_fractional_identities(std::uint64_t seed,
                                                int draws) {
  VerificationReport rep;
  rep.suite = "fractional_identities";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int i = 0; i < draws; ++i) {
    const int n = unif(rng) < 0.5 ? 1 : 2;
    const double r = 1.0 + 2.0 * unif(rng);
    const double gamma = (0.05 + 0.9 * unif(rng)) * (n / r);
    const double p = r + (n / gamma - r) * (0.05 + 0.9 * unif(rng));
    const double inv_rp = r > 1.0 ? 1.0 - 1.0 / r : 0.0;
    const double q = 1.0 / (1.0 / p - gamma / n);
    const double sigma = n * r / (n - r * gamma);
    const double beta = (q / sigma) * (1.0 / p + inv_rp);

    InstanceRecord rec;
    rec.instance_id = "draw" + std::to_string(i);
    rec.witness = "r=" + fmt(r) + ";gamma=" + fmt(gamma) + ";p=" + fmt(p);
    rec.lhs = sigma * beta;
    rec.rhs = q * (1.0 / p + inv_rp);
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    const bool id1 = std::abs(rec.lhs - rec.rhs) <= 1e-12 * std::max(1.0, rec.rhs);
    const bool id2 = std::abs(1.0 / q - (1.0 / p - gamma / n)) <= 1e-12;
    rec.pass = id1 && id2 && beta > 1.0;
    rep.add(std::move(rec));
  }
  return rep;
}

}  // namespace olab
