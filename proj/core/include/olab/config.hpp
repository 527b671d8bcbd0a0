#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "olab/grid.hpp"
#include "olab/verify.hpp"
#include "olab/weights.hpp"

namespace olab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightSpec {
  std::string name;
  std::string kind;  // constant | step | power | max_power | product | from_csv
  double value = 1.0;
  std::vector<double> values;      // step
  double alpha = 0.0;              // power
  std::array<double, 2> center{0.0, 0.0};
  std::vector<PowerTerm> terms;    // max_power
  std::vector<WeightSpec> factors; // product
  std::string path;                // from_csv
};

struct FunctionSpec {
  std::string name;
  std::string kind;  // constant | indicator | spike | random_piecewise | from_csv
  double value = 1.0;
  double lo = 0.0, hi = 0.5, height = 1.0;  // indicator along axis 0
  double amplitude = 1.0;                   // random_piecewise
  int count = 1;                            // random_piecewise draws
  int spikes = 1;                           // spike cells
  std::string path;
};

struct ExperimentConfig {
  int n = 1;
  int L = 8;
  double r = 1.0;
  double delta = 0.0;
  double a = 0.0;  // 0 selects the default 2^{n+1}
  std::vector<WeightSpec> weights_u;
  std::vector<WeightSpec> weights_v;
  std::vector<FunctionSpec> functions;
  std::vector<double> eps_ladder_fractions{0.5, 0.25, 0.125};  // times eps0
  std::vector<double> illustrative_eps{0.25};
  TGrid t_grid;
  double gamma = 0.5;
  double p = 1.5;
  std::vector<std::string> suites;
  std::map<std::string, double> budgets;
  std::uint64_t seed = 1;
  int subsets_per_cube = 200;
  double psi_t0 = 2.0;

  double effective_a() const;
  DyadicGrid grid() const { return DyadicGrid(n, L); }
};

/// Parses and validates; throws ConfigError with a diagnostic.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

GridFunction build_weight(const WeightSpec& spec, const DyadicGrid& grid);

/// Expands a function spec to named grid functions (random kinds expand to
/// `count` seeded draws).
std::vector<std::pair<std::string, GridFunction>> build_functions(
    const FunctionSpec& spec, const DyadicGrid& grid, std::uint64_t seed);

}  // namespace olab
