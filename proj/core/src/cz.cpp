#include "olab/cz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace olab {

int band_index(double a, double v) {
  if (!(v > 0.0)) throw std::domain_error("band_index: v must be positive");
  int k = static_cast<int>(std::floor(std::log(v) / std::log(a)));
  while (std::pow(a, k) >= v) --k;
  while (std::pow(a, k + 1) < v) ++k;
  return k;
}

std::pair<int, int> default_k_range(const GridFunction& g,
                                    const YoungFunction& phi,
                                    const GridFunction& v, double a) {
  const MaximalResult mg = m_phi_dyadic(g, phi);
  double mg_max = 0.0, mg_min_pos = kEvalCap;
  for (std::size_t i = 0; i < mg.output.size(); ++i) {
    const double x = mg.output[i];
    mg_max = std::max(mg_max, x);
    if (x > 0.0) mg_min_pos = std::min(mg_min_pos, x);
  }
  double v_max = 0.0, v_min = kEvalCap;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v_max = std::max(v_max, v[i]);
    v_min = std::min(v_min, v[i]);
  }

  int k_hi, k_lo;
  if (mg_max == 0.0) {
    k_lo = 0;
    k_hi = 0;
  } else {
    k_hi = static_cast<int>(std::ceil(std::log(mg_max) / std::log(a)));
    k_lo = static_cast<int>(std::floor(std::log(mg_min_pos) / std::log(a))) - 1;
  }
  if (v_min > 0.0 && v_max > 0.0) {
    k_lo = std::min(k_lo, band_index(a, v_min));
    k_hi = std::max(k_hi, band_index(a, v_max) + 1);
  }
  if (k_hi - k_lo > 200) k_lo = k_hi - 200;
  return {k_lo, k_hi};
}

CZDecomposition decompose(const GridFunction& g, const YoungFunction& phi,
                          double a, int k_min, int k_max) {
  const DyadicGrid& grid = g.grid();
  const double two_n = std::ldexp(1.0, grid.dimension());
  if (!(a > two_n))
    throw std::invalid_argument("decompose: requires a > 2^n");
  if (k_min > k_max) throw std::invalid_argument("decompose: empty k range");

  const CubeNormTable table = cube_norms(g, phi);
  MaximalResult mg = sweep_from_table(table, 0.0, "M_{Phi,D}[" + phi.name + "]");

  CZDecomposition d{grid, a, 1.0, k_min, k_max, {}, std::move(mg.output),
                    std::nullopt, false, false};
  d.levels.reserve(k_max - k_min + 1);

  for (int k = k_min; k <= k_max; ++k) {
    CZLevel lev;
    lev.k = k;
    const double thr = std::pow(a, k);
    if (table.norms[0][0] > thr) {
      // No enclosing cube exists on a finite domain; undefined at this k.
      lev.defined = false;
      d.levels.push_back(std::move(lev));
      continue;
    }
    // Root-down search for the first crossings.
    std::vector<DyadicCube> stack{grid.root()};
    while (!stack.empty()) {
      const DyadicCube q = stack.back();
      stack.pop_back();
      if (q.level == grid.max_level()) continue;
      for (const DyadicCube& c : grid.children(q)) {
        const double nv = table.at(c);
        if (nv > thr) {
          lev.cubes.push_back(c);
          lev.norm.push_back(nv);
          lev.sandwich_ok.push_back(nv <= two_n * thr * (1.0 + 1e-9) ? 1 : 0);
        } else {
          stack.push_back(c);
        }
      }
    }
    d.levels.push_back(std::move(lev));
  }
  return d;
}

void classify(CZDecomposition& d, const GridFunction& v, double r) {
  const DyadicGrid& grid = d.grid;
  if (!(v.grid() == grid)) throw std::invalid_argument("classify: grid mismatch");
  d.r = r;

  std::vector<double> vr_terms(v.size());
  const double m = grid.cell_measure();
  for (std::size_t i = 0; i < v.size(); ++i)
    vr_terms[i] = std::pow(v[i], r) * m;
  d.vr_sums.emplace(grid, vr_terms);

  // Band of each cell: band[c] = k iff a^k < v_c <= a^{k+1}.
  std::vector<int> band(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) band[i] = band_index(d.a, v[i]);

  const double la = std::log(d.a);
  for (CZLevel& lev : d.levels) {
    if (!lev.defined) continue;
    const int k = lev.k;
    lev.ell.resize(lev.cubes.size());
    lev.in_gamma.resize(lev.cubes.size());
    for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
      const double avg = d.vr_sums->average(lev.cubes[j]);
      int l;
      if (avg < std::pow(d.a, k * r)) {
        l = -1;
      } else {
        l = static_cast<int>(std::floor(std::log(avg) / (r * la))) - k;
        if (l < 0) l = 0;
        while (l > 0 && avg < std::pow(d.a, (k + l) * r)) --l;
        while (avg >= std::pow(d.a, (k + l + 1) * r)) ++l;
      }
      lev.ell[j] = l;

      bool gamma = false;
      grid.for_each_cell(lev.cubes[j], [&](std::size_t c) {
        if (band[c] == k) gamma = true;
      });
      lev.in_gamma[j] = gamma ? 1 : 0;
    }

    lev.ek_mask.assign(v.size(), 0);
    for (std::size_t c = 0; c < v.size(); ++c)
      if (band[c] == k && d.mg[c] > v[c]) lev.ek_mask[c] = 1;
  }
  d.classified = true;
}

void secondary_decompose(CZDecomposition& d, const GridFunction& v, double r) {
  if (!d.classified)
    throw std::logic_error("secondary_decompose: classify first");
  const DyadicGrid& grid = d.grid;
  const double two_n = std::ldexp(1.0, grid.dimension());

  std::vector<int> band(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) band[i] = band_index(d.a, v[i]);

  for (CZLevel& lev : d.levels) {
    if (!lev.defined) continue;
    const int k = lev.k;
    const double thr = std::pow(d.a, k * r);
    lev.secondary.assign(lev.cubes.size(), {});
    lev.secondary_avg.assign(lev.cubes.size(), {});
    lev.secondary_sandwich_ok.assign(lev.cubes.size(), {});
    lev.secondary_in_gamma.assign(lev.cubes.size(), {});
    lev.secondary_empty.assign(lev.cubes.size(), 0);

    for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
      if (lev.ell[j] != -1) continue;
      // The Lambda_{-1} cube itself averages below a^{kr}; search below it.
      std::vector<DyadicCube> stack{lev.cubes[j]};
      while (!stack.empty()) {
        const DyadicCube q = stack.back();
        stack.pop_back();
        if (q.level == grid.max_level()) continue;
        for (const DyadicCube& c : grid.children(q)) {
          const double avg = d.vr_sums->average(c);
          if (avg > thr) {
            lev.secondary[j].push_back(c);
            lev.secondary_avg[j].push_back(avg);
            lev.secondary_sandwich_ok[j].push_back(
                avg <= two_n * thr * (1.0 + 1e-9) ? 1 : 0);
            bool gamma = false;
            grid.for_each_cell(c, [&](std::size_t cell) {
              if (band[cell] == k) gamma = true;
            });
            lev.secondary_in_gamma[j].push_back(gamma ? 1 : 0);
          } else {
            stack.push_back(c);
          }
        }
      }
      if (lev.secondary[j].empty()) lev.secondary_empty[j] = 1;
    }
  }
  d.secondary_done = true;
}

namespace {

bool strictly_contains(const DyadicGrid& grid, const DyadicCube& outer,
                       const DyadicCube& inner) {
  return outer.level < inner.level && grid.contains(outer, inner);
}

}  // namespace

PrincipalCubes build_principal(const std::vector<TaggedCube>& family,
                               const GridFunction& u,
                               const PrincipalParams& params) {
  const DyadicGrid& grid = u.grid();
  PrincipalCubes out;
  out.assignment.assign(family.size(), 0);
  if (family.empty()) return out;

  // Deduplicate geometric repeats (the constructions produce unique cubes;
  // a repeat would double-count in the sums).
  std::vector<std::size_t> fam_idx;
  fam_idx.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    bool dup = false;
    for (std::size_t j : fam_idx)
      if (family[j].cube == family[i].cube) dup = true;
    if (!dup) fam_idx.push_back(i);
  }

  const CubeSums u_sums = CubeSums::integrals(u);
  std::vector<double> avg_u(family.size());
  for (std::size_t i : fam_idx)
    avg_u[i] = u_sums.average(family[i].cube);

  auto threshold = [&](std::size_t fi, std::size_t parent_fi) {
    const double base = avg_u[parent_fi];
    if (params.mode == PrincipalMode::ell) return 2.0 * base;
    const int dk = family[fi].k - family[parent_fi].k;
    return std::pow(params.a, dk * params.beta * params.r) * base;
  };

  // Generation 0: inclusion-maximal family cubes.
  std::vector<std::size_t> frontier;
  for (std::size_t i : fam_idx) {
    bool maximal = true;
    for (std::size_t j : fam_idx)
      if (j != i && strictly_contains(grid, family[j].cube, family[i].cube))
        maximal = false;
    if (maximal) frontier.push_back(i);
  }

  int generation = 0;
  while (!frontier.empty()) {
    out.generations.emplace_back();
    for (std::size_t fi : frontier) {
      out.generations.back().push_back(out.all.size());
      out.all.push_back(family[fi]);
      out.generation_of.push_back(generation);
    }

    std::vector<std::size_t> next;
    for (std::size_t parent : frontier) {
      std::vector<std::size_t> candidates;
      for (std::size_t i : fam_idx) {
        if (!strictly_contains(grid, family[parent].cube, family[i].cube))
          continue;
        if (avg_u[i] > threshold(i, parent)) candidates.push_back(i);
      }
      for (std::size_t c : candidates) {
        bool maximal = true;
        for (std::size_t other : candidates)
          if (other != c &&
              strictly_contains(grid, family[other].cube, family[c].cube))
            maximal = false;
        if (maximal) next.push_back(c);
      }
    }
    frontier = std::move(next);
    ++generation;
  }

  // Assignment: smallest principal cube containing each family cube.
  for (std::size_t i = 0; i < family.size(); ++i) {
    std::size_t best = out.all.size();
    int best_level = -1;
    for (std::size_t p = 0; p < out.all.size(); ++p) {
      if (!grid.contains(out.all[p].cube, family[i].cube)) continue;
      if (out.all[p].cube.level > best_level) {
        best_level = out.all[p].cube.level;
        best = p;
      }
    }
    if (best == out.all.size())
      throw std::logic_error("build_principal: family cube not covered");
    out.assignment[i] = best;
  }
  return out;
}

PrincipalSum principal_sum(const PrincipalCubes& p, const GridFunction& u) {
  const DyadicGrid& grid = u.grid();
  const CubeSums u_sums = CubeSums::integrals(u);
  std::vector<double> h(u.size(), 0.0);
  for (const TaggedCube& tq : p.all) {
    const double addend = u_sums.average(tq.cube);
    grid.for_each_cell(tq.cube, [&](std::size_t c) { h[c] += addend; });
  }
  PrincipalSum out{GridFunction(grid, std::move(h)), 0.0, 0};
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double ratio = out.h[c] / u[c];
    if (ratio > out.c) {
      out.c = ratio;
      out.witness_cell = c;
    }
  }
  return out;
}

}  // namespace olab
