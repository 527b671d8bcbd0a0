// olab: config-driven verification runs for the Orlicz maximal-operator lab.
//
//   olab corpus <config> [-o DIR]     materialize the weight/function corpus
//   olab run <config> [-o DIR]        run the configured suites
//   olab verify <suite> <config>      run a single suite
//   olab report <dir>                 render summary.json to table + plot CSV
//   olab maximal <config> [--gamma g] dump M_Phi(fv) with argmax annotations
//   olab cz <config>                  dump the Calderon-Zygmund decomposition
//
// Exit codes: 0 all checks pass, 1 inequality violation or budget
// regression, 2 configuration error. OLAB_THREADS caps worker threads.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "olab/config.hpp"
#include "olab/runner.hpp"

namespace {

int guarded(int (*fn)(const olab::ExperimentConfig&,
                      const std::filesystem::path&),
            const std::string& config_path, const std::filesystem::path& out) {
  try {
    const olab::ExperimentConfig cfg = olab::load_config(config_path);
    return fn(cfg, out);
  } catch (const olab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz maximal-operator verification lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", suite, report_dir, out_file;
  double gamma = 0.0;

  CLI::App* corpus = app.add_subcommand("corpus", "materialize the corpus");
  corpus->add_option("config", config_path)->required();
  corpus->add_option("-o,--out", out_dir, "output directory");

  CLI::App* run = app.add_subcommand("run", "run the configured suites");
  run->add_option("config", config_path)->required();
  run->add_option("-o,--out", out_dir, "output directory");

  CLI::App* verify = app.add_subcommand("verify", "run a single suite");
  verify->add_option("suite", suite)->required();
  verify->add_option("config", config_path)->required();
  verify->add_option("-o,--out", out_dir, "output directory");

  CLI::App* report = app.add_subcommand("report", "render a run directory");
  report->add_option("dir", report_dir)->required();

  CLI::App* maximal = app.add_subcommand("maximal", "dump the maximal function");
  maximal->add_option("config", config_path)->required();
  maximal->add_option("--gamma", gamma, "fractional exponent (0 = plain M_Phi)");
  maximal->add_option("-o,--out", out_file, "output CSV")->default_val("maximal.csv");

  CLI::App* cz = app.add_subcommand("cz", "dump the CZ decomposition");
  cz->add_option("config", config_path)->required();
  cz->add_option("-o,--out", out_file, "output JSON")->default_val("cz.json");

  CLI11_PARSE(app, argc, argv);

  if (corpus->parsed()) return guarded(olab::run_corpus, config_path, out_dir);
  if (run->parsed()) {
    try {
      const olab::ExperimentConfig cfg = olab::load_config(config_path);
      return olab::run_experiment(cfg, out_dir).exit_code;
    } catch (const olab::ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  if (verify->parsed()) {
    try {
      olab::ExperimentConfig cfg = olab::load_config(config_path);
      cfg.suites = {suite};
      return olab::run_experiment(cfg, out_dir).exit_code;
    } catch (const olab::ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  if (report->parsed()) return olab::run_report(report_dir);
  if (maximal->parsed()) {
    try {
      const olab::ExperimentConfig cfg = olab::load_config(config_path);
      return olab::run_maximal_dump(cfg, gamma, out_file);
    } catch (const olab::ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  if (cz->parsed()) {
    try {
      const olab::ExperimentConfig cfg = olab::load_config(config_path);
      return olab::run_cz_dump(cfg, out_file);
    } catch (const olab::ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  return 2;
}
