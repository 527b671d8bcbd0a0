#include "olab/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace olab {

using nlohmann::json;

double ExperimentConfig::effective_a() const {
  return a > 0.0 ? a : std::ldexp(1.0, n + 1);
}

namespace {

WeightSpec parse_weight(const json& j) {
  WeightSpec w;
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("weight spec must be an object with a \"kind\"");
  w.kind = j.at("kind").get<std::string>();
  w.name = j.value("name", w.kind);
  if (w.kind == "constant") {
    w.value = j.value("value", 1.0);
  } else if (w.kind == "step") {
    if (!j.contains("values")) throw ConfigError("step weight: missing \"values\"");
    w.values = j.at("values").get<std::vector<double>>();
  } else if (w.kind == "power") {
    w.alpha = j.value("alpha", 0.5);
    if (j.contains("center")) {
      const auto& c = j.at("center");
      if (c.is_number()) {
        w.center = {c.get<double>(), 0.0};
      } else {
        auto vec = c.get<std::vector<double>>();
        w.center = {vec.at(0), vec.size() > 1 ? vec[1] : 0.0};
      }
    }
  } else if (w.kind == "max_power") {
    if (!j.contains("terms")) throw ConfigError("max_power weight: missing \"terms\"");
    for (const auto& tj : j.at("terms")) {
      PowerTerm t;
      t.alpha = tj.value("alpha", 0.5);
      if (tj.contains("center")) {
        auto vec = tj.at("center").get<std::vector<double>>();
        t.center = {vec.at(0), vec.size() > 1 ? vec[1] : 0.0};
      }
      t.scale = tj.value("scale", 1.0);
      w.terms.push_back(t);
    }
  } else if (w.kind == "product") {
    if (!j.contains("factors")) throw ConfigError("product weight: missing \"factors\"");
    for (const auto& fj : j.at("factors")) w.factors.push_back(parse_weight(fj));
  } else if (w.kind == "from_csv") {
    w.path = j.at("path").get<std::string>();
  } else {
    throw ConfigError("unknown weight kind: " + w.kind);
  }
  return w;
}

FunctionSpec parse_function(const json& j) {
  FunctionSpec f;
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("function spec must be an object with a \"kind\"");
  f.kind = j.at("kind").get<std::string>();
  f.name = j.value("name", f.kind);
  if (f.kind == "constant") {
    f.value = j.value("value", 1.0);
  } else if (f.kind == "indicator") {
    f.lo = j.value("lo", 0.0);
    f.hi = j.value("hi", 0.5);
    f.height = j.value("height", 1.0);
    if (!(f.lo >= 0.0) || !(f.hi > f.lo) || !(f.hi <= 1.0))
      throw ConfigError("indicator: need 0 <= lo < hi <= 1");
  } else if (f.kind == "spike") {
    f.height = j.value("height", 8.0);
    f.spikes = j.value("spikes", 1);
  } else if (f.kind == "random_piecewise") {
    f.amplitude = j.value("amplitude", 1.0);
    f.count = j.value("count", 1);
  } else if (f.kind == "from_csv") {
    f.path = j.at("path").get<std::string>();
  } else {
    throw ConfigError("unknown function kind: " + f.kind);
  }
  return f;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    const auto& grid = j.at("grid");
    cfg.n = grid.at("n").get<int>();
    cfg.L = grid.at("L").get<int>();
    if (cfg.n != 1 && cfg.n != 2) throw ConfigError("grid.n must be 1 or 2");
    if (cfg.L < 0 || cfg.n * cfg.L > 26) throw ConfigError("grid.L out of range");

    const auto& young = j.at("young");
    cfg.r = young.at("r").get<double>();
    cfg.delta = young.value("delta", 0.0);
    if (cfg.r < 1.0) throw ConfigError("young.r must be >= 1");
    if (cfg.delta < 0.0) throw ConfigError("young.delta must be >= 0");

    cfg.a = j.value("a", 0.0);
    if (cfg.a != 0.0 && !(cfg.a > std::ldexp(1.0, cfg.n)))
      throw ConfigError("a must exceed 2^n");

    for (const auto& wj : j.at("weights_u")) cfg.weights_u.push_back(parse_weight(wj));
    for (const auto& wj : j.at("weights_v")) cfg.weights_v.push_back(parse_weight(wj));
    for (const auto& fj : j.at("functions")) cfg.functions.push_back(parse_function(fj));
    if (cfg.weights_u.empty() || cfg.weights_v.empty() || cfg.functions.empty())
      throw ConfigError("weights_u, weights_v and functions must be nonempty");

    if (j.contains("eps_ladder_fractions"))
      cfg.eps_ladder_fractions = j.at("eps_ladder_fractions").get<std::vector<double>>();
    if (j.contains("illustrative_eps"))
      cfg.illustrative_eps = j.at("illustrative_eps").get<std::vector<double>>();
    for (double x : cfg.eps_ladder_fractions)
      if (!(x > 0.0) || !(x < 1.0))
        throw ConfigError("eps_ladder_fractions entries must lie in (0,1)");
    for (double x : cfg.illustrative_eps)
      if (!(x > 0.0) || !(x < 1.0))
        throw ConfigError("illustrative_eps entries must lie in (0,1)");

    if (j.contains("t_grid")) {
      const auto& t = j.at("t_grid");
      cfg.t_grid.min = t.value("min", 1e-3);
      cfg.t_grid.max = t.value("max", 1e3);
      cfg.t_grid.count = t.value("count", 25);
      if (!(cfg.t_grid.min > 0.0) || !(cfg.t_grid.max >= cfg.t_grid.min) ||
          cfg.t_grid.count < 1)
        throw ConfigError("invalid t_grid");
    }

    cfg.gamma = j.value("gamma", 0.5);
    cfg.p = j.value("p", 1.5);
    if (!(cfg.gamma > 0.0) || !(cfg.gamma < cfg.n / cfg.r))
      throw ConfigError("gamma must lie in (0, n/r)");

    cfg.suites = j.value("suites", std::vector<std::string>{});
    static const char* kKnown[] = {"reverse_holder",  "level_set",
                                   "claim1",          "claim3",
                                   "theorem1",        "corollaries",
                                   "fractional_mid",  "fractional_diag",
                                   "fractional_identities"};
    for (const std::string& s : cfg.suites) {
      bool ok = false;
      for (const char* k : kKnown)
        if (s == k) ok = true;
      if (!ok) throw ConfigError("unknown suite: " + s);
    }

    if (j.contains("budgets"))
      cfg.budgets = j.at("budgets").get<std::map<std::string, double>>();
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.subsets_per_cube = j.value("subsets_per_cube", 200);
    cfg.psi_t0 = j.value("psi_t0", 2.0);
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

GridFunction build_weight(const WeightSpec& spec, const DyadicGrid& grid) {
  if (spec.kind == "constant") return make_constant_weight(grid, spec.value);
  if (spec.kind == "step") return make_step_weight(grid, spec.values);
  if (spec.kind == "power") return make_power_weight(grid, spec.alpha, spec.center);
  if (spec.kind == "max_power") return make_max_power_weight(grid, spec.terms);
  if (spec.kind == "product") {
    if (spec.factors.empty()) throw ConfigError("product weight: empty factors");
    GridFunction acc = build_weight(spec.factors.front(), grid);
    for (std::size_t i = 1; i < spec.factors.size(); ++i)
      acc = pointwise_product(acc, build_weight(spec.factors[i], grid));
    return acc;
  }
  if (spec.kind == "from_csv") return read_csv_file(grid, spec.path);
  throw ConfigError("unknown weight kind: " + spec.kind);
}

namespace {

std::uint64_t mix_name(std::uint64_t seed, const std::string& name, int idx) {
  std::uint64_t h = seed ^ 0x9E3779B97F4A7C15ull;
  for (char c : name) h = (h ^ static_cast<std::uint64_t>(c)) * 0x100000001B3ull;
  h ^= static_cast<std::uint64_t>(idx + 1) * 0xD6E8FEB86659FD93ull;
  return h;
}

}  // namespace

std::vector<std::pair<std::string, GridFunction>> build_functions(
    const FunctionSpec& spec, const DyadicGrid& grid, std::uint64_t seed) {
  std::vector<std::pair<std::string, GridFunction>> out;
  const std::size_t cells = grid.cell_count();
  if (spec.kind == "constant") {
    out.emplace_back(spec.name, GridFunction::constant(grid, spec.value));
  } else if (spec.kind == "indicator") {
    std::vector<double> vals(cells, 0.0);
    const std::size_t per_axis = std::size_t(1) << grid.max_level();
    for (std::size_t i = 0; i < cells; ++i) {
      const double x = (grid.cell_cube(i).coord[0] + 0.5) / static_cast<double>(per_axis);
      if (x >= spec.lo && x < spec.hi) vals[i] = spec.height;
    }
    out.emplace_back(spec.name, GridFunction(grid, std::move(vals)));
  } else if (spec.kind == "spike") {
    std::vector<double> vals(cells, 0.0);
    std::mt19937_64 rng(mix_name(seed, spec.name, 0));
    std::uniform_int_distribution<std::size_t> pick(0, cells - 1);
    for (int s = 0; s < spec.spikes; ++s) vals[pick(rng)] = spec.height;
    out.emplace_back(spec.name, GridFunction(grid, std::move(vals)));
  } else if (spec.kind == "random_piecewise") {
    for (int d = 0; d < spec.count; ++d) {
      std::mt19937_64 rng(mix_name(seed, spec.name, d));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::vector<double> vals(cells);
      for (std::size_t i = 0; i < cells; ++i) vals[i] = spec.amplitude * unif(rng);
      out.emplace_back(spec.name + "_" + std::to_string(d),
                       GridFunction(grid, std::move(vals)));
    }
  } else if (spec.kind == "from_csv") {
    out.emplace_back(spec.name, read_csv_file(grid, spec.path));
  } else {
    throw ConfigError("unknown function kind: " + spec.kind);
  }
  return out;
}

}  // namespace olab
