#pragma once

#include <complex>
#include <filesystem>
#include <span>

#include "eitprop/field_io.hpp"
#include "eitprop/spectral.hpp"

namespace eitprop {

/// Gaussian boundary condition amplitude*exp(-r^2/w0^2).
///
/// `waist` is the field 1/e radius (intensity 1/e^2), the convention for
/// which the Rayleigh length is q*w0^2/2.
struct BeamSpec {
  double waist = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::complex<double> amplitude{1.0, 0.0};

  bool operator==(const BeamSpec&) const = default;
};

/// Requires waist >= 4*max(dx, dy).
ComplexField gaussian_beam(const TransverseGrid& grid, const BeamSpec& spec);

/// Pointwise sum of the beams. Contributions are accumulated in a canonical
/// order so the result does not depend on the order of `specs`.
ComplexField composite_beams(const TransverseGrid& grid, std::span<const BeamSpec> specs);

enum class AmplitudeMapping {
  linear,       ///< amplitude proportional to gray level
  square_root,  ///< intensity proportional to gray level
};

struct RasterOptions {
  double pitch = 0.0;  ///< physical size of one image pixel; integer multiple of the grid pitch
  AmplitudeMapping mapping = AmplitudeMapping::square_root;
  double blur_sigma_px = 2.0;  ///< Gaussian pre-blur in grid samples, 0 disables
};

/// Image centered on the grid, zero outside, zero phase. Image row 0 is the
/// top (largest y).
ComplexField raster_to_field(const GrayImage& image, const TransverseGrid& grid,
                             const RasterOptions& options);

ComplexField load_raster(const std::filesystem::path& path, const TransverseGrid& grid,
                         const RasterOptions& options);

/// Fraction of spectral power at |k_perp| > threshold_fraction*k0. Accepts
/// either representation.
double band_limit_report(const ComplexField& f, double k0, double threshold_fraction = 0.3);

}  // namespace eitprop
