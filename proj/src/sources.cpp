#include "eitprop/sources.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>
#include <vector>

#include "eitprop/errors.hpp"

namespace eitprop {

ComplexField gaussian_beam(const TransverseGrid& grid, const BeamSpec& spec) {
  const double guard = 4.0 * std::max(grid.dx(), grid.dy());
  if (!(spec.waist >= guard)) {
    std::ostringstream msg;
    msg << "gaussian_beam: waist " << spec.waist << " m is under-resolved; resolution guard "
        << "requires waist >= 4*max(dx, dy) = " << guard << " m";
    throw ConfigError(msg.str());
  }
  ComplexField f(grid);
  const double inv_w2 = 1.0 / (spec.waist * spec.waist);
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    const double dy = grid.y(j) - spec.y0;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double dx = grid.x(i) - spec.x0;
      f.at(i, j) = spec.amplitude * std::exp(-(dx * dx + dy * dy) * inv_w2);
    }
  }
  return f;
}

ComplexField composite_beams(const TransverseGrid& grid, std::span<const BeamSpec> specs) {
  if (specs.empty()) throw ConfigError("composite_beams: empty beam list");
  std::vector<BeamSpec> sorted(specs.begin(), specs.end());
  const auto key = [](const BeamSpec& b) {
    return std::make_tuple(b.x0, b.y0, b.waist, b.amplitude.real(), b.amplitude.imag());
  };
  std::sort(sorted.begin(), sorted.end(),
            [&](const BeamSpec& a, const BeamSpec& b) { return key(a) < key(b); });
  ComplexField sum = gaussian_beam(grid, sorted.front());
  for (std::size_t n = 1; n < sorted.size(); ++n) sum += gaussian_beam(grid, sorted[n]);
  return sum;
}

namespace {

// Separable Gaussian blur with zero boundary, kernel truncated at 4 sigma.
void blur(std::vector<double>& a, std::size_t nx, std::size_t ny, double sigma) {
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double norm = 0.0;
  for (std::ptrdiff_t r = -radius; r <= radius; ++r) {
    const double v = std::exp(-static_cast<double>(r * r) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(r + radius)] = v;
    norm += v;
  }
  for (auto& v : kernel) v /= norm;

  std::vector<double> tmp(a.size(), 0.0);
  const auto sx = static_cast<std::ptrdiff_t>(nx);
  const auto sy = static_cast<std::ptrdiff_t>(ny);
  for (std::ptrdiff_t j = 0; j < sy; ++j) {
    for (std::ptrdiff_t i = 0; i < sx; ++i) {
      double acc = 0.0;
      for (std::ptrdiff_t r = -radius; r <= radius; ++r) {
        const auto ii = i - r;
        if (ii < 0 || ii >= sx) continue;
        acc += kernel[static_cast<std::size_t>(r + radius)] * a[static_cast<std::size_t>(j * sx + ii)];
      }
      tmp[static_cast<std::size_t>(j * sx + i)] = acc;
    }
  }
  for (std::ptrdiff_t j = 0; j < sy; ++j) {
    for (std::ptrdiff_t i = 0; i < sx; ++i) {
      double acc = 0.0;
      for (std::ptrdiff_t r = -radius; r <= radius; ++r) {
        const auto jj = j - r;
        if (jj < 0 || jj >= sy) continue;
        acc += kernel[static_cast<std::size_t>(r + radius)] * tmp[static_cast<std::size_t>(jj * sx + i)];
      }
      a[static_cast<std::size_t>(j * sx + i)] = acc;
    }
  }
}

}  // namespace

ComplexField raster_to_field(const GrayImage& image, const TransverseGrid& grid,
                             const RasterOptions& options) {
  if (!(options.pitch > 0.0)) throw ConfigError("raster: pitch must be > 0");
  if (std::abs(grid.dx() - grid.dy()) > 1e-12 * grid.dx()) {
    throw ConfigError("raster: images require a square grid pitch (dx == dy)");
  }
  const double ratio = options.pitch / grid.dx();
  const auto factor = static_cast<std::size_t>(std::llround(ratio));
  if (factor == 0 || std::abs(ratio - static_cast<double>(factor)) > 1e-9 * ratio) {
    std::ostringstream msg;
    msg << "raster: image pitch " << options.pitch << " m must be an integer multiple of the grid pitch "
        << grid.dx() << " m";
    throw ConfigError(msg.str());
  }
  const std::size_t w = image.width * factor;
  const std::size_t h = image.height * factor;
  if (w > grid.nx() || h > grid.ny()) {
    std::ostringstream msg;
    msg << "raster: image of " << w << " x " << h << " samples does not fit the " << grid.nx()
        << " x " << grid.ny() << " grid";
    throw ConfigError(msg.str());
  }
  if (options.blur_sigma_px < 0.0) throw ConfigError("raster: blur_sigma_px must be >= 0");

  const std::size_t ox = grid.nx() / 2 - w / 2;
  const std::size_t oy = grid.ny() / 2 - h / 2;
  const double maxval = image.maxval;
  std::vector<double> amp(grid.size(), 0.0);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t j = oy + (h - 1 - r);
    for (std::size_t c = 0; c < w; ++c) {
      const double g = static_cast<double>(image.at(c / factor, r / factor)) / maxval;
      amp[j * grid.nx() + ox + c] =
          options.mapping == AmplitudeMapping::square_root ? std::sqrt(g) : g;
    }
  }
  if (options.blur_sigma_px > 0.0) blur(amp, grid.nx(), grid.ny(), options.blur_sigma_px);

  ComplexField f(grid);
  for (std::size_t n = 0; n < amp.size(); ++n) f.values()[n] = amp[n];
  return f;
}

ComplexField load_raster(const std::filesystem::path& path, const TransverseGrid& grid,
                         const RasterOptions& options) {
  return raster_to_field(read_pgm(path), grid, options);
}

double band_limit_report(const ComplexField& f, double k0, double threshold_fraction) {
  const ComplexField spec =
      f.representation() == Representation::spectral ? f : to_spectrum(f);
  const auto& g = spec.grid();
  const double cut_sq = (threshold_fraction * k0) * (threshold_fraction * k0);
  double total = 0.0;
  double outside = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double p = std::norm(spec.at(i, j));
      total += p;
      if (g.kperp_sq(i, j) > cut_sq) outside += p;
    }
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace eitprop
