#include "eitprop/units.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "eitprop/errors.hpp"

namespace eitprop {
namespace {

struct UnitEntry {
  std::string_view name;
  Dimension dimension;
  double scale;
};

constexpr std::array kUnits{
    UnitEntry{"m", Dimension::length, 1.0},
    UnitEntry{"km", Dimension::length, 1e3},
    UnitEntry{"cm", Dimension::length, 1e-2},
    UnitEntry{"mm", Dimension::length, 1e-3},
    UnitEntry{"um", Dimension::length, 1e-6},
    UnitEntry{"µm", Dimension::length, 1e-6},
    UnitEntry{"nm", Dimension::length, 1e-9},
    UnitEntry{"1/m", Dimension::inverse_length, 1.0},
    UnitEntry{"m^-1", Dimension::inverse_length, 1.0},
    UnitEntry{"1/cm", Dimension::inverse_length, 1e2},
    UnitEntry{"cm^-1", Dimension::inverse_length, 1e2},
    UnitEntry{"1/mm", Dimension::inverse_length, 1e3},
    UnitEntry{"mm^-1", Dimension::inverse_length, 1e3},
    UnitEntry{"1/um", Dimension::inverse_length, 1e6},
    UnitEntry{"um^-1", Dimension::inverse_length, 1e6},
    UnitEntry{"1/s", Dimension::rate, 1.0},
    UnitEntry{"s^-1", Dimension::rate, 1.0},
    UnitEntry{"Hz", Dimension::rate, 1.0},
    UnitEntry{"kHz", Dimension::rate, 1e3},
    UnitEntry{"MHz", Dimension::rate, 1e6},
    UnitEntry{"GHz", Dimension::rate, 1e9},
    UnitEntry{"m^2/s", Dimension::diffusivity, 1.0},
    UnitEntry{"cm^2/s", Dimension::diffusivity, 1e-4},
    UnitEntry{"mm^2/s", Dimension::diffusivity, 1e-6},
    UnitEntry{"m/s", Dimension::speed, 1.0},
    UnitEntry{"km/s", Dimension::speed, 1e3},
    UnitEntry{"cm/s", Dimension::speed, 1e-2},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(Dimension dim) {
  switch (dim) {
    case Dimension::length: return "length";
    case Dimension::inverse_length: return "1/length";
    case Dimension::rate: return "1/time";
    case Dimension::diffusivity: return "length^2/time";
    case Dimension::speed: return "length/time";
    case Dimension::dimensionless: return "dimensionless";
  }
  return "?";
}

double parse_quantity(std::string_view text, Dimension expected,
                      std::span<const NamedUnit> extra_units) {
  const auto s = trim(text);
  double number = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  // from_chars rejects a leading '+'
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, number);
  if (ec != std::errc{} || ptr == begin) {
    throw ConfigError("cannot parse a number from '" + std::string(text) + "'");
  }
  if (!std::isfinite(number)) {
    throw ConfigError("non-finite value '" + std::string(text) + "'");
  }
  const auto unit = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  if (unit.empty()) return number;

  for (const auto& u : extra_units) {
    if (u.name != unit) continue;
    if (u.dimension != expected) {
      throw ConfigError("unit '" + std::string(unit) + "' has dimension " +
                        std::string(to_string(u.dimension)) + ", expected " +
                        std::string(to_string(expected)));
    }
    return number * u.si_value;
  }
  for (const auto& u : kUnits) {
    if (u.name != unit) continue;
    if (u.dimension != expected) {
      throw ConfigError("unit '" + std::string(unit) + "' has dimension " +
                        std::string(to_string(u.dimension)) + ", expected " +
                        std::string(to_string(expected)));
    }
    return number * u.scale;
  }
  throw ConfigError("unknown unit '" + std::string(unit) + "'");
}

}  // namespace eitprop
