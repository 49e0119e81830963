#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eitprop/config.hpp"
#include "eitprop/diagnostics.hpp"
#include "eitprop/propagator.hpp"

namespace eitprop {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Everything a propagation run needs, built from a config.
struct Scenario {
  TransverseGrid grid;
  OpticalParams optics;
  PropagationMode mode;
  std::optional<MediumParams> medium;  ///< medium of the run (eit mode) or the config's base medium
  ComplexField input;
  std::vector<Point> beam_centers;
  double half_window = 0.0;
};

Scenario build_scenario(const ScenarioConfig& cfg);

struct PropagationOutcome {
  Scenario scenario;
  std::vector<double> z;              ///< slice positions
  std::vector<ComplexField> slices;   ///< fields at z
  DiagnosticsReport report;           ///< final slice
  DiagnosticsReport input_report;
  double spreading = 0.0;  ///< mean per-beam (or whole-field) relative x-width growth
  std::optional<double> band_limit_fraction;
  std::vector<std::string> warnings;
};

/// Runs the propagation described by `cfg` without touching the filesystem
/// (except to read image/raw sources).
PropagationOutcome simulate(const ScenarioConfig& cfg, unsigned threads = 1);

struct RunOptions {
  std::filesystem::path out_dir;
  unsigned threads = 1;
};

struct Artifact {
  std::string name;  ///< relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunResult {
  std::vector<std::string> warnings;
  std::vector<Artifact> artifacts;
  nlohmann::ordered_json metadata;
  std::optional<PropagationOutcome> outcome;  ///< propagate only
};

/// Per-delta CSV files of (k/k0, Im chi/alpha, Re chi/alpha).
RunResult run_chi_scan(const ScenarioConfig& cfg, const RunOptions& opts);

/// Heatmaps, raw dumps, width/cross-section CSVs, report and metadata JSON.
RunResult run_propagate(const ScenarioConfig& cfg, const RunOptions& opts);

/// Resolved medium plus derived quantities; design.json and medium.toml.
RunResult run_design(const ScenarioConfig& cfg, const RunOptions& opts);

/// One run_propagate per sweep value (in sweep_NNN/), aggregated into
/// sweep.csv in config order. Failed points are recorded, not fatal.
RunResult run_sweep(const ScenarioConfig& cfg, const RunOptions& opts);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Hash of the canonical config plus the contents of any input files.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace eitprop
