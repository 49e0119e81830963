#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eitprop/medium.hpp"
#include "eitprop/sources.hpp"

namespace eitprop {

// Scenario files are TOML. Quantities are numbers (SI) or strings with a unit
// suffix, e.g. "795 nm", "11 cm^2/s", "1.2 MHz". Two scenario units exist:
// "w0" (source.reference_waist) and "zR" (its Rayleigh length q*w0^2/2).

enum class ModeKind { free_space, eit, uniform };

struct GridSection {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  bool double_window = false;  ///< doubles nx, ny at fixed pitch

  bool operator==(const GridSection&) const = default;
};

struct ImageSourceConfig {
  std::filesystem::path path;
  double pitch = 0.0;
  AmplitudeMapping mapping = AmplitudeMapping::square_root;
  double blur_px = 2.0;

  bool operator==(const ImageSourceConfig&) const = default;
};

struct SourceSection {
  double reference_waist = 0.0;  ///< 0 when undefined
  std::vector<BeamSpec> beams;
  std::optional<ImageSourceConfig> image;
  std::optional<std::filesystem::path> raw;

  bool operator==(const SourceSection&) const = default;
};

struct RunSection {
  ModeKind mode = ModeKind::free_space;
  std::optional<double> delta_over_gamma;  ///< overrides the medium detuning in eit mode
  std::complex<double> uniform_chi{};
  double z = 0.0;
  std::vector<double> slices;  ///< absolute positions, last == z
  bool normalize_heatmaps = true;
  bool factor_background = false;
  bool write_raw = true;
  double band_limit_fraction = 0.3;
  double band_limit_warn = 1e-2;
  double beam_half_window = 0.0;  ///< 0 selects half the smallest beam separation

  bool operator==(const RunSection&) const = default;
};

struct ScanSection {
  double k_max_over_k0 = 4.0;
  std::size_t points = 401;
  std::vector<double> delta_over_gamma{0.0, 1.0, -1.0, 2.0, -2.0};

  bool operator==(const ScanSection&) const = default;
};

struct SweepSection {
  std::string parameter;  ///< dotted key path, e.g. "source.reference_waist"
  std::vector<std::string> values;

  bool operator==(const SweepSection&) const = default;
};

struct ScenarioConfig {
  OpticalParams optics;
  std::optional<MediumParams> medium;
  std::optional<DesignTargets> design;
  std::optional<GridSection> grid;
  SourceSection source;
  RunSection run;
  ScanSection scan;
  std::optional<SweepSection> sweep;

  /// Original document text and directory, used to re-resolve sweep points.
  std::string document;
  std::filesystem::path base_dir;
  /// Unknown keys and similar non-fatal findings (errors under strict mode).
  std::vector<std::string> warnings;

  /// Explicit medium, or the designed one. Throws ConfigError if neither.
  MediumParams base_medium() const;

  /// Compares resolved settings only.
  bool same_settings(const ScenarioConfig& other) const;
};

ScenarioConfig parse_config(const std::filesystem::path& path, bool strict = false);
ScenarioConfig parse_config_string(std::string_view text,
                                   const std::filesystem::path& base_dir = {},
                                   bool strict = false);

/// Canonical SI serialization; parses back to the same settings.
std::string to_toml(const ScenarioConfig& cfg);

/// Re-resolves the original document with one dotted key replaced. Numbers
/// and booleans are inserted as such, anything else as a string.
ScenarioConfig with_override(const ScenarioConfig& cfg, std::string_view key_path,
                             std::string_view value, bool strict = false);

}  // namespace eitprop
