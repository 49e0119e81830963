#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "eitprop/spectral.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return EITPROP_SOURCE_DIR; }

/// Fresh directory under the build tree, emptied on construction.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::path(EITPROP_BINARY_DIR) / "scratch" / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline eitprop::ComplexField random_field(const eitprop::TransverseGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  eitprop::ComplexField f(g);
  for (auto& v : f.values()) v = {n(rng), n(rng)};
  return f;
}

inline double max_abs_diff(const eitprop::ComplexField& a, const eitprop::ComplexField& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.values().size(); ++n) {
    m = std::max(m, std::abs(a.values()[n] - b.values()[n]));
  }
  return m;
}

inline double max_abs(const eitprop::ComplexField& a) {
  double m = 0.0;
  for (const auto& v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace testing
