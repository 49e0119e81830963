#pragma once

#include <span>
#include <string>
#include <string_view>

namespace eitprop {

enum class Dimension { length, inverse_length, rate, diffusivity, speed, dimensionless };

std::string_view to_string(Dimension dim);

/// A unit defined at run time, e.g. "w0" or "zR" once the reference beam is known.
struct NamedUnit {
  std::string name;
  Dimension dimension;
  double si_value;
};

/// Parses "<number> [unit]" into SI. A bare number is taken as SI already.
/// Rates in Hz/kHz/MHz are plain 1/s (no 2*pi).
/// Throws ConfigError on unknown units or a dimension mismatch.
double parse_quantity(std::string_view text, Dimension expected,
                      std::span<const NamedUnit> extra_units = {});

}  // namespace eitprop
