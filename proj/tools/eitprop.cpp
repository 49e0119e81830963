// eitprop: batch front end for chi scans, propagation runs, medium design
// and parameter sweeps.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "eitprop/errors.hpp"
#include "eitprop/runner.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, runtime_error = 2, strict_warning = 3 };

struct Common {
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool strict = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "scenario TOML file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory")->required();
  sub->add_option("--threads", c.threads, "worker threads (0: hardware concurrency)");
  sub->add_flag("--strict", c.strict, "unknown keys are errors; guard warnings exit with 3");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace eitprop;
  CLI::App app{"Paraxial propagation through an EIT vapor with atomic diffusion"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Common common;
  auto* scan = app.add_subcommand("chi-scan", "susceptibility vs transverse wavenumber");
  auto* prop = app.add_subcommand("propagate", "propagate the configured source");
  auto* design = app.add_subcommand("design", "resolve the medium and its derived quantities");
  auto* sweep = app.add_subcommand("sweep", "one propagation per [sweep] value");
  for (auto* sub : {scan, prop, design, sweep}) add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::config_error;
  }

  RunOptions opts{common.out, common.threads};
  if (opts.threads == 0) opts.threads = std::max(1u, std::thread::hardware_concurrency());

  ScenarioConfig cfg;
  try {
    cfg = parse_config(common.config, common.strict);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return Exit::config_error;
  } catch (const std::exception& e) {
    std::cerr << "error reading config: " << e.what() << '\n';
    return Exit::config_error;
  }

  RunResult result;
  try {
    if (*scan) {
      result = run_chi_scan(cfg, opts);
    } else if (*prop) {
      result = run_propagate(cfg, opts);
    } else if (*design) {
      result = run_design(cfg, opts);
    } else {
      result = run_sweep(cfg, opts);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return Exit::config_error;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return Exit::runtime_error;
  }

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "wrote " << result.artifacts.size() << " artifacts to " << common.out << '\n';
  if (common.strict && !result.warnings.empty()) return Exit::strict_warning;
  return Exit::ok;
}
