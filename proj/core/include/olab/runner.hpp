#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "olab/config.hpp"
#include "olab/verify.hpp"

namespace olab {

struct SuiteOutcome {
  std::string suite;
  bool pass = true;
  double computed_constant = 0.0;  // max empirical constant across instances
  std::size_t violations = 0;
  std::size_t saturated = 0;
  std::vector<VerificationReport> reports;  // one per instance
  std::vector<std::string> instance_keys;
};

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 violation or budget regression
  std::vector<SuiteOutcome> suites;
};

/// Executes the configured suites over the weight/function corpus and writes
/// summary.json, one CSV per suite, and budget_diff.json into out_dir.
/// Deterministic given (config, seed): reruns produce byte-identical files.
RunOutcome run_experiment(const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir);

/// Materializes the weight/function corpus as CSV plus a manifest carrying
/// the certified constants of every weight.
int run_corpus(const ExperimentConfig& cfg,
               const std::filesystem::path& out_dir);

/// Renders summary.json in dir to a human-readable table (report.txt) and a
/// plot-ready CSV (plot_data.csv: suite,t,ratio).
int run_report(const std::filesystem::path& dir);

/// `maximal` subcommand: M_Phi(f v) (or M_{gamma,Phi} when gamma > 0) for
/// the first configured f and v, as CSV with argmax-cube annotations.
int run_maximal_dump(const ExperimentConfig& cfg, double gamma,
                     const std::filesystem::path& out_file);

/// `cz` subcommand: the full decomposition of g = f v as JSON (per k: cubes
/// with level, coords, norm, l class, Gamma flag, principal generation).
int run_cz_dump(const ExperimentConfig& cfg,
                const std::filesystem::path& out_file);

}  // namespace olab
