#pragma once

#include <stdexcept>
#include <string>

namespace eitprop {

/// Invalid user input: bad config values, malformed files, violated invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Programming error on the caller's side, e.g. passing a spectral field
/// where a real-space one is required.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace eitprop
