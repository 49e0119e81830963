#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "eitprop/medium.hpp"
#include "eitprop/spectral.hpp"

namespace eitprop {

struct FreeSpace {};
struct EitMedium {
  MediumParams medium;
};
/// k-independent susceptibility, mostly for testing.
struct UniformChi {
  std::complex<double> chi;
};

using PropagationMode = std::variant<FreeSpace, EitMedium, UniformChi>;

/// Whether the uniform k = 0 part of chi is kept in the kernel or divided
/// out. Dividing it out keeps fields representable when exp(-kappa z)
/// underflows; callers then account for background_exponent themselves.
enum class Background { keep, factor_out };

std::complex<double> mode_chi(const PropagationMode& mode, double kperp_sq);

/// i*chi(0)*z: the log of the factor removed under Background::factor_out.
std::complex<double> background_exponent(const PropagationMode& mode, double z);

/// Per-bin multiplier exp[i(chi(k) - k^2/(2q)) z] in spectral layout.
ComplexField transfer_function(const PropagationMode& mode, const OpticalParams& optics,
                               const TransverseGrid& grid, double z,
                               Background background = Background::keep);

/// Exact solution of the paraxial equation over distance z: one spectral
/// multiply, no stepping. z == 0 returns the input unchanged.
ComplexField propagate(const ComplexField& f, const PropagationMode& mode,
                       const OpticalParams& optics, double z,
                       Background background = Background::keep);

/// Output positions; each slice is computed directly from z = 0.
struct PropagationPlan {
  std::vector<double> slices;

  double total() const { return slices.empty() ? 0.0 : slices.back(); }
  /// Nonnegative and strictly increasing; throws ConfigError.
  void validate() const;

  /// `count` equally spaced positions ending at z (z/count, ..., z).
  static PropagationPlan uniform(double z, std::size_t count);
};

std::vector<ComplexField> propagate_slices(const ComplexField& f, const PropagationMode& mode,
                                           const OpticalParams& optics,
                                           const PropagationPlan& plan,
                                           Background background = Background::keep,
                                           unsigned threads = 1);

}  // namespace eitprop
