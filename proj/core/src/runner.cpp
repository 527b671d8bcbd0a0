#include "olab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "olab/cz.hpp"
#include "olab/parallel.hpp"

namespace olab {

using nlohmann::json;

namespace {

std::string fmt_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_sig6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

/// One CSV row per inequality id: the worst-ratio record carries the
/// witness; pass is the conjunction. Rows indexed by a t witness stay
/// per-record so the ratio-vs-t profile survives into the plot data.
std::vector<InstanceRecord> aggregate_records(const VerificationReport& rep) {
  std::vector<InstanceRecord> out;
  std::map<std::string, std::size_t> worst_at;
  for (const InstanceRecord& rec : rep.records) {
    if (rec.witness.rfind("t=", 0) == 0) {
      out.push_back(rec);
      continue;
    }
    auto it = worst_at.find(rec.instance_id);
    if (it == worst_at.end()) {
      worst_at.emplace(rec.instance_id, out.size());
      out.push_back(rec);
      continue;
    }
    InstanceRecord& agg = out[it->second];
    agg.pass = agg.pass && rec.pass;
    agg.saturated = agg.saturated || rec.saturated;
    if (!rec.degenerate && (agg.degenerate || rec.ratio > agg.ratio)) {
      const bool pass_keep = agg.pass;
      const bool sat_keep = agg.saturated;
      agg = rec;
      agg.pass = pass_keep;
      agg.saturated = sat_keep;
    }
  }
  return out;
}

void write_suite_csv(const std::filesystem::path& path,
                     const SuiteOutcome& suite) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "suite,instance_id,k,l,cube,lhs,rhs,ratio,pass\n";
  for (std::size_t i = 0; i < suite.reports.size(); ++i) {
    const std::string& key = suite.instance_keys[i];
    for (const InstanceRecord& rec : aggregate_records(suite.reports[i])) {
      os << suite.suite << ',' << key << ':' << rec.instance_id << ',';
      if (rec.k != kNoIndex) os << rec.k;
      os << ',';
      if (rec.ell != kNoIndex) os << rec.ell;
      os << ',';
      // the witness column carries a cube, a cell, or a t value
      std::string w = rec.witness;
      std::replace(w.begin(), w.end(), ',', ';');
      os << w << ',' << fmt_full(rec.lhs) << ',' << fmt_full(rec.rhs) << ','
         << fmt_full(rec.ratio) << ',' << (rec.pass ? 1 : 0) << '\n';
    }
  }
}

struct Corpus {
  DyadicGrid grid{1, 0};
  std::vector<std::pair<std::string, GridFunction>> us, vs, fs;
};

Corpus build_corpus(const ExperimentConfig& cfg) {
  Corpus c{cfg.grid(), {}, {}, {}};
  for (const WeightSpec& w : cfg.weights_u)
    c.us.emplace_back(w.name, build_weight(w, c.grid));
  for (const WeightSpec& w : cfg.weights_v)
    c.vs.emplace_back(w.name, build_weight(w, c.grid));
  for (const FunctionSpec& f : cfg.functions)
    for (auto& named : build_functions(f, c.grid, cfg.seed))
      c.fs.push_back(std::move(named));
  return c;
}

std::vector<double> eps_ladder_for(const ExperimentConfig& cfg,
                                   const SweepContext& ctx,
                                   bool include_illustrative) {
  std::vector<double> eps;
  for (double frac : cfg.eps_ladder_fractions) eps.push_back(frac * ctx.eps0);
  if (include_illustrative)
    for (double e : cfg.illustrative_eps) eps.push_back(e);
  return eps;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Corpus corpus = build_corpus(cfg);
  const double a = cfg.effective_a();
  const YoungFunction phi = make_canonical(cfg.r, cfg.delta);

  // Per-(u,v) sweep contexts, computed once.
  std::vector<std::vector<SweepContext>> contexts(corpus.us.size());
  for (std::size_t ui = 0; ui < corpus.us.size(); ++ui) {
    contexts[ui].reserve(corpus.vs.size());
    for (std::size_t vi = 0; vi < corpus.vs.size(); ++vi)
      contexts[ui].push_back(make_context(corpus.us[ui].second,
                                          corpus.vs[vi].second, cfg.r,
                                          cfg.delta, a));
  }

  RunOutcome outcome;
  for (const std::string& suite_name : cfg.suites) {
    SuiteOutcome suite;
    suite.suite = suite_name;

    if (suite_name == "reverse_holder") {
      std::vector<std::pair<std::string, GridFunction>> targets;
      for (const auto& [name, w] : corpus.us) targets.emplace_back("u:" + name, w);
      for (const auto& [name, w] : corpus.vs)
        targets.emplace_back("v^r:" + name, pointwise_pow(w, cfg.r));
      suite.reports.resize(targets.size());
      suite.instance_keys.resize(targets.size());
      parallel_for(targets.size(), [&](std::size_t i) {
        suite.instance_keys[i] = targets[i].first;
        suite.reports[i] =
            verify_reverse_holder(targets[i].second, cfg.seed, cfg.subsets_per_cube);
      });
    } else if (suite_name == "level_set" || suite_name == "claim1" ||
               suite_name == "claim3") {
      struct Item {
        std::size_t ui, vi, fi;
        double eps;  // claims only
      };
      std::vector<Item> items;
      for (std::size_t ui = 0; ui < corpus.us.size(); ++ui)
        for (std::size_t vi = 0; vi < corpus.vs.size(); ++vi)
          for (std::size_t fi = 0; fi < corpus.fs.size(); ++fi) {
            if (suite_name == "level_set") {
              items.push_back({ui, vi, fi, 0.0});
            } else {
              for (double eps :
                   eps_ladder_for(cfg, contexts[ui][vi], true))
                items.push_back({ui, vi, fi, eps});
            }
          }
      suite.reports.resize(items.size());
      suite.instance_keys.resize(items.size());
      parallel_for(items.size(), [&](std::size_t i) {
        const Item& it = items[i];
        const GridFunction& u = corpus.us[it.ui].second;
        const GridFunction& v = corpus.vs[it.vi].second;
        const GridFunction& f = corpus.fs[it.fi].second;
        const SweepContext& ctx = contexts[it.ui][it.vi];
        std::string key = corpus.us[it.ui].first + "/" + corpus.vs[it.vi].first +
                          "/" + corpus.fs[it.fi].first;

        const GridFunction g = pointwise_product(f, v);
        const auto [klo, khi] = default_k_range(g, phi, v, a);
        CZDecomposition d = decompose(g, phi, a, klo, khi);
        classify(d, v, cfg.r);
        if (suite_name == "level_set") {
          suite.reports[i] = verify_level_set_lemma(u, v, ctx, d);
        } else if (suite_name == "claim1") {
          char tag[32];
          std::snprintf(tag, sizeof(tag), "/eps=%.6g", it.eps);
          key += tag;
          suite.reports[i] = verify_claim1(f, v, phi, it.eps, ctx, d);
        } else {
          char tag[32];
          std::snprintf(tag, sizeof(tag), "/eps=%.6g", it.eps);
          key += tag;
          suite.reports[i] = verify_claim3(f, v, phi, it.eps, ctx, d);
        }
        suite.instance_keys[i] = key;
      });
    } else if (suite_name == "theorem1" || suite_name == "corollaries") {
      struct Item {
        std::size_t ui, vi, fi;
      };
      std::vector<Item> items;
      for (std::size_t ui = 0; ui < corpus.us.size(); ++ui)
        for (std::size_t vi = 0; vi < corpus.vs.size(); ++vi)
          for (std::size_t fi = 0; fi < corpus.fs.size(); ++fi)
            items.push_back({ui, vi, fi});
      suite.reports.resize(items.size());
      suite.instance_keys.resize(items.size());
      parallel_for(items.size(), [&](std::size_t i) {
        const Item& it = items[i];
        const GridFunction& u = corpus.us[it.ui].second;
        const GridFunction& v = corpus.vs[it.vi].second;
        const GridFunction& f = corpus.fs[it.fi].second;
        const SweepContext& ctx = contexts[it.ui][it.vi];
        suite.instance_keys[i] = corpus.us[it.ui].first + "/" +
                                 corpus.vs[it.vi].first + "/" +
                                 corpus.fs[it.fi].first;
        if (suite_name == "theorem1") {
          suite.reports[i] =
              verify_theorem1(u, v, f, phi, eps_ladder_for(cfg, ctx, false),
                              cfg.t_grid, ctx, true);
        } else {
          // Psi ~ Phi for t >= t0: the canonical shape with a shifted log.
          YoungFunction psi = make_power_log(cfg.r, 0.0, "psi_shifted");
          const double r = cfg.r, delta = cfg.delta;
          psi.eval = [r, delta](double z) {
            if (z <= 0.0) return 0.0;
            const double lp = log_plus(z / 2.0);
            return std::pow(z, r) * std::pow(1.0 + lp, delta);
          };
          psi.lower_type = r;
          psi.log_power = delta;
          const double eps =
              cfg.illustrative_eps.empty() ? 0.25 : cfg.illustrative_eps.front();
          suite.reports[i] = verify_corollaries(u, v, f, phi, psi, cfg.psi_t0,
                                                eps, cfg.t_grid, ctx);
        }
      });
    } else if (suite_name == "fractional_mid" || suite_name == "fractional_diag") {
      struct Item {
        std::size_t ui, vi, fi;
      };
      std::vector<Item> items;
      for (std::size_t ui = 0; ui < corpus.us.size(); ++ui)
        for (std::size_t vi = 0; vi < corpus.vs.size(); ++vi)
          for (std::size_t fi = 0; fi < corpus.fs.size(); ++fi)
            items.push_back({ui, vi, fi});
      suite.reports.resize(items.size());
      suite.instance_keys.resize(items.size());
      parallel_for(items.size(), [&](std::size_t i) {
        const Item& it = items[i];
        const GridFunction& u = corpus.us[it.ui].second;
        const GridFunction& v = corpus.vs[it.vi].second;
        const GridFunction& f = corpus.fs[it.fi].second;
        suite.instance_keys[i] = corpus.us[it.ui].first + "/" +
                                 corpus.vs[it.vi].first + "/" +
                                 corpus.fs[it.fi].first;
        if (suite_name == "fractional_mid") {
          suite.reports[i] = verify_fractional_mid(u, v, f, cfg.r, cfg.delta,
                                                   cfg.gamma, cfg.p, cfg.t_grid);
        } else {
          const double eps =
              cfg.illustrative_eps.empty() ? 0.25 : cfg.illustrative_eps.front();
          suite.reports[i] = verify_fractional_diag(u, v, f, cfg.r, cfg.delta,
                                                    cfg.gamma, eps, cfg.t_grid);
        }
      });
    } else if (suite_name == "fractional_identities") {
      suite.reports.resize(1);
      suite.instance_keys.resize(1);
      suite.instance_keys[0] = "draws";
      suite.reports[0] = verify_fractional_identities(cfg.seed, 50);
    } else {
      throw ConfigError("unknown suite: " + suite_name);
    }

    for (const VerificationReport& rep : suite.reports) {
      suite.pass = suite.pass && rep.pass;
      suite.violations += rep.violations;
      suite.saturated += rep.saturated_count;
      suite.computed_constant =
          std::max(suite.computed_constant, rep.empirical_constant);
    }
    write_suite_csv(out_dir / (suite_name + ".csv"), suite);
    outcome.suites.push_back(std::move(suite));
  }

  // Budget comparison: a recorded budget is reproduced when the computed
  // constant stays within +10%.
  json budget_diff = json::object();
  bool budget_regression = false;
  for (const SuiteOutcome& s : outcome.suites) {
    auto it = cfg.budgets.find(s.suite);
    if (it == cfg.budgets.end()) continue;
    const bool ok = s.computed_constant <= it->second * 1.10 + 1e-12;
    budget_regression = budget_regression || !ok;
    budget_diff[s.suite] = {{"budget", it->second},
                            {"computed", s.computed_constant},
                            {"ratio", it->second > 0.0
                                          ? s.computed_constant / it->second
                                          : 0.0},
                            {"pass", ok}};
  }

  bool any_violation = false;
  json summary;
  summary["config"] = {{"n", cfg.n},       {"L", cfg.L},
                       {"r", cfg.r},       {"delta", cfg.delta},
                       {"a", a},           {"seed", cfg.seed},
                       {"gamma", cfg.gamma}, {"p", cfg.p}};
  json jsuites = json::object();
  for (const SuiteOutcome& s : outcome.suites) {
    any_violation = any_violation || !s.pass;
    json inst = json::object();
    for (std::size_t i = 0; i < s.reports.size(); ++i) {
      const VerificationReport& rep = s.reports[i];
      json jc = json::object();
      for (const auto& [k, v] : rep.constants) jc[k] = v;
      json jw = json::object();
      if (!rep.records.empty()) {
        const InstanceRecord& w = rep.records[rep.worst_index];
        jw = {{"id", w.instance_id}, {"witness", w.witness},
              {"lhs", w.lhs},        {"rhs", w.rhs},
              {"ratio", w.ratio}};
      }
      inst[s.instance_keys[i]] = {{"pass", rep.pass},
                                  {"empirical_constant", rep.empirical_constant},
                                  {"violations", rep.violations},
                                  {"degenerate", rep.degenerate_count},
                                  {"saturated", rep.saturated_count},
                                  {"constants", jc},
                                  {"worst", jw}};
    }
    jsuites[s.suite] = {{"pass", s.pass},
                        {"computed_constant", s.computed_constant},
                        {"violations", s.violations},
                        {"saturated", s.saturated},
                        {"instances", inst}};
  }
  summary["suites"] = jsuites;
  summary["budget_diff"] = budget_diff;

  outcome.exit_code = (any_violation || budget_regression) ? 1 : 0;
  summary["exit_code"] = outcome.exit_code;

  {
    std::ofstream os(out_dir / "summary.json");
    os << summary.dump(2) << '\n';
  }
  {
    std::ofstream os(out_dir / "budget_diff.json");
    os << budget_diff.dump(2) << '\n';
  }
  return outcome;
}

int run_corpus(const ExperimentConfig& cfg,
               const std::filesystem::path& out_dir) {
  const Corpus corpus = build_corpus(cfg);
  std::filesystem::create_directories(out_dir / "weights_u");
  std::filesystem::create_directories(out_dir / "weights_v");
  std::filesystem::create_directories(out_dir / "functions");

  json manifest;
  manifest["grid"] = {{"n", cfg.n}, {"L", cfg.L}};
  manifest["seed"] = cfg.seed;

  auto describe_weight = [&](const std::string& rel,
                             const GridFunction& w) -> json {
    const WeightProfile p = profile_weight(w, 1.0 + 0.25 / cfg.r, true);
    return {{"file", rel},
            {"a1", p.a1.value},
            {"ainf", p.ainf.value},
            {"r_w", p.r_w},
            {"eps_w", p.eps_w},
            {"q", p.q_used},
            {"aq", p.aq.value},
            {"rh_s", p.rh.value},
            {"s", p.s_used}};
  };

  json ju = json::object(), jv = json::object(), jf = json::object();
  for (const auto& [name, w] : corpus.us) {
    const std::string rel = "weights_u/" + name + ".csv";
    write_csv_file(w, (out_dir / rel).string());
    ju[name] = describe_weight(rel, w);
  }
  for (const auto& [name, w] : corpus.vs) {
    const std::string rel = "weights_v/" + name + ".csv";
    write_csv_file(w, (out_dir / rel).string());
    jv[name] = describe_weight(rel, w);
  }
  for (const auto& [name, f] : corpus.fs) {
    const std::string rel = "functions/" + name + ".csv";
    write_csv_file(f, (out_dir / rel).string());
    double fmax = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      fmax = std::max(fmax, f[i]);
      mass += f[i] * f.grid().cell_measure();
    }
    jf[name] = {{"file", rel}, {"max", fmax}, {"integral", mass}};
  }
  manifest["weights_u"] = ju;
  manifest["weights_v"] = jv;
  manifest["functions"] = jf;

  std::ofstream os(out_dir / "manifest.json");
  os << manifest.dump(2) << '\n';
  return 0;
}

int run_report(const std::filesystem::path& dir) {
  const auto summary_path = dir / "summary.json";
  std::ifstream is(summary_path);
  if (!is) {
    std::fprintf(stderr, "report: missing %s\n", summary_path.string().c_str());
    return 2;
  }
  json summary;
  try {
    is >> summary;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "report: bad summary.json: %s\n", e.what());
    return 2;
  }

  std::ofstream table(dir / "report.txt");
  table << "suite                     instance                                         "
           "constant      pass\n";
  for (const auto& [suite, content] : summary.at("suites").items()) {
    for (const auto& [key, inst] : content.at("instances").items()) {
      char line[256];
      std::snprintf(line, sizeof(line), "%-25s %-48s %-13s %s\n", suite.c_str(),
                    key.c_str(),
                    fmt_sig6(inst.value("empirical_constant", 0.0)).c_str(),
                    inst.value("pass", false) ? "pass" : "FAIL");
      table << line;
    }
  }

  // Plot data: every t-indexed row of every suite CSV.
  std::ofstream plot(dir / "plot_data.csv");
  plot << "suite,t,ratio\n";
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".csv") continue;
    if (entry.path().filename() == "plot_data.csv") continue;
    std::ifstream csv(entry.path());
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
      std::vector<std::string> cols;
      std::stringstream ss(line);
      std::string col;
      while (std::getline(ss, col, ',')) cols.push_back(col);
      if (cols.size() != 9) continue;
      if (cols[4].rfind("t=", 0) != 0) continue;
      plot << cols[0] << ',' << cols[4].substr(2) << ',' << cols[7] << '\n';
    }
  }
  return 0;
}

int run_maximal_dump(const ExperimentConfig& cfg, double gamma,
                     const std::filesystem::path& out_file) {
  const Corpus corpus = build_corpus(cfg);
  const YoungFunction phi = make_canonical(cfg.r, cfg.delta);
  const GridFunction fv =
      pointwise_product(corpus.fs.front().second, corpus.vs.front().second);
  const MaximalResult res = gamma > 0.0 ? m_gamma_phi(fv, phi, gamma)
                                        : m_phi_dyadic(fv, phi);
  std::ofstream os(out_file);
  if (!os) return 2;
  os << "cell_index,value,argmax_level,argmax_x,argmax_y\n";
  char buf[128];
  for (std::size_t i = 0; i < res.output.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%d,%u,%u\n", i, res.output[i],
                  res.argmax[i].level, res.argmax[i].coord[0],
                  res.argmax[i].coord[1]);
    os << buf;
  }
  return 0;
}

int run_cz_dump(const ExperimentConfig& cfg,
                const std::filesystem::path& out_file) {
  const Corpus corpus = build_corpus(cfg);
  const double a = cfg.effective_a();
  const YoungFunction phi = make_canonical(cfg.r, cfg.delta);
  const GridFunction& v = corpus.vs.front().second;
  const GridFunction& u = corpus.us.front().second;
  const GridFunction g = pointwise_product(corpus.fs.front().second, v);

  const auto [klo, khi] = default_k_range(g, phi, v, a);
  CZDecomposition d = decompose(g, phi, a, klo, khi);
  classify(d, v, cfg.r);
  secondary_decompose(d, v, cfg.r);

  // Principal generations per l family and for the secondary family.
  std::map<int, std::vector<TaggedCube>> delta_ell;
  std::vector<TaggedCube> delta_minus;
  for (const CZLevel& lev : d.levels) {
    if (!lev.defined) continue;
    for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
      if (lev.ell[j] >= 0 && lev.in_gamma[j])
        delta_ell[lev.ell[j]].push_back({lev.cubes[j], lev.k});
      if (lev.ell[j] == -1)
        for (std::size_t i = 0; i < lev.secondary[j].size(); ++i)
          if (lev.secondary_in_gamma[j][i])
            delta_minus.push_back({lev.secondary[j][i], lev.k});
    }
  }
  std::map<std::string, int> generation;
  auto cube_key = [](const DyadicCube& q) { return to_string(q); };
  for (const auto& [l, family] : delta_ell) {
    PrincipalCubes pc =
        build_principal(family, u, PrincipalParams{PrincipalMode::ell});
    for (std::size_t i = 0; i < pc.all.size(); ++i)
      generation[cube_key(pc.all[i].cube)] = pc.generation_of[i];
  }
  if (!delta_minus.empty()) {
    SweepContext ctx = make_context(u, v, cfg.r, cfg.delta, a);
    PrincipalCubes pc = build_principal(
        delta_minus, u,
        PrincipalParams{PrincipalMode::minus_one, a, cfg.r, ctx.theta / 2.0});
    for (std::size_t i = 0; i < pc.all.size(); ++i)
      generation[cube_key(pc.all[i].cube)] = pc.generation_of[i];
  }

  json out;
  out["a"] = a;
  out["k_min"] = d.k_min;
  out["k_max"] = d.k_max;
  json jlevels = json::array();
  for (const CZLevel& lev : d.levels) {
    json jl;
    jl["k"] = lev.k;
    jl["defined"] = lev.defined;
    json jcubes = json::array();
    if (lev.defined) {
      for (std::size_t j = 0; j < lev.cubes.size(); ++j) {
        const DyadicCube& q = lev.cubes[j];
        json jq = {{"level", q.level},
                   {"coords", {q.coord[0], q.coord[1]}},
                   {"norm", lev.norm[j]},
                   {"l", lev.ell[j]},
                   {"gamma", lev.ell[j] >= 0 ? lev.in_gamma[j] != 0 : false},
                   {"sandwich_ok", lev.sandwich_ok[j] != 0}};
        auto it = generation.find(cube_key(q));
        jq["principal_generation"] = it == generation.end() ? -1 : it->second;
        if (lev.ell[j] == -1) {
          json sec = json::array();
          for (std::size_t i = 0; i < lev.secondary[j].size(); ++i) {
            const DyadicCube& sq = lev.secondary[j][i];
            json js = {{"level", sq.level},
                       {"coords", {sq.coord[0], sq.coord[1]}},
                       {"avg_vr", lev.secondary_avg[j][i]},
                       {"gamma", lev.secondary_in_gamma[j][i] != 0},
                       {"sandwich_ok", lev.secondary_sandwich_ok[j][i] != 0}};
            auto sit = generation.find(cube_key(sq));
            js["principal_generation"] = sit == generation.end() ? -1 : sit->second;
            sec.push_back(js);
          }
          jq["secondary"] = sec;
          jq["secondary_empty"] = lev.secondary_empty[j] != 0;
        }
        jcubes.push_back(jq);
      }
    }
    jl["cubes"] = jcubes;
    jlevels.push_back(jl);
  }
  out["levels"] = jlevels;

  std::ofstream os(out_file);
  if (!os) return 2;
  os << out.dump(2) << '\n';
  return 0;
}

}  // namespace olab
