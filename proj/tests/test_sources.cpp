#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "eitprop/errors.hpp"
#include "eitprop/field_io.hpp"
#include "eitprop/sources.hpp"
#include "support.hpp"

using namespace eitprop;

TEST_CASE("gaussian beam samples") {
  const auto g = make_grid(64, 64, 1e-6, 1e-6);
  const BeamSpec b{.waist = 8e-6, .x0 = 4e-6, .y0 = -2e-6, .amplitude = {0.0, 2.0}};
  const auto f = gaussian_beam(g, b);
  CHECK(f.at(36, 30) == std::complex<double>(0.0, 2.0));
  const double r2 = 16e-12 + 4e-12;
  CHECK(std::abs(f.at(32, 32)) == doctest::Approx(2 * std::exp(-r2 / 64e-12)).epsilon(1e-15));
}

TEST_CASE("waist resolution guard") {
  const auto g = make_grid(64, 64, 1e-6, 2e-6);
  CHECK_NOTHROW(gaussian_beam(g, {.waist = 8e-6}));
  CHECK_THROWS_AS(gaussian_beam(g, {.waist = 7.9e-6}), ConfigError);
}

TEST_CASE("composite beams do not depend on listing order") {
  const auto g = make_grid(128, 128, 1e-6, 1e-6);
  std::array<BeamSpec, 3> beams{BeamSpec{.waist = 10e-6, .x0 = -30e-6},
                                BeamSpec{.waist = 12e-6, .x0 = 0.0, .y0 = 5e-6, .amplitude = {0.5, 0.5}},
                                BeamSpec{.waist = 10e-6, .x0 = 30e-6}};
  const auto ref = composite_beams(g, beams);
  std::sort(beams.begin(), beams.end(), [](const auto& a, const auto& b) { return a.x0 > b.x0; });
  do {
    CHECK(testing::max_abs_diff(composite_beams(g, beams), ref) == 0.0);
  } while (std::next_permutation(beams.begin(), beams.end(),
                                 [](const auto& a, const auto& b) { return a.x0 < b.x0; }));
  CHECK_THROWS_AS(composite_beams(g, std::span<const BeamSpec>{}), ConfigError);
}

namespace {

GrayImage tiny_image() {
  // 2 x 3, row 0 is the top
  return GrayImage{2, 3, 255, {255, 0, 0, 64, 0, 0}};
}

}  // namespace

TEST_CASE("raster placement, orientation and mapping") {
  const auto g = make_grid(16, 16, 1e-6, 1e-6);
  const auto f = raster_to_field(tiny_image(), g, {.pitch = 2e-6, .mapping = AmplitudeMapping::square_root,
                                                   .blur_sigma_px = 0.0});
  // 4 x 6 samples, offsets 6 and 5; image row 0 lands on the top rows 9, 10
  CHECK(f.at(6, 10) == 1.0);
  CHECK(f.at(7, 9) == 1.0);
  CHECK(f.at(8, 10) == 0.0);
  CHECK(f.at(8, 8).real() == doctest::Approx(std::sqrt(64.0 / 255.0)).epsilon(1e-15));
  CHECK(f.at(9, 7).real() == doctest::Approx(std::sqrt(64.0 / 255.0)).epsilon(1e-15));
  CHECK(f.at(6, 5) == 0.0);
  double total = 0.0;
  for (const auto& v : f.values()) total += std::norm(v);
  CHECK(total == doctest::Approx(4 * (1.0 + 64.0 / 255.0)).epsilon(1e-14));

  const auto lin = raster_to_field(tiny_image(), g, {.pitch = 2e-6, .mapping = AmplitudeMapping::linear,
                                                     .blur_sigma_px = 0.0});
  CHECK(lin.at(8, 8).real() == doctest::Approx(64.0 / 255.0).epsilon(1e-15));
}

TEST_CASE("blur keeps the amplitude sum away from edges") {
  const auto g = make_grid(64, 64, 1e-6, 1e-6);
  const auto sharp = raster_to_field(tiny_image(), g, {.pitch = 2e-6, .blur_sigma_px = 0.0});
  const auto soft = raster_to_field(tiny_image(), g, {.pitch = 2e-6, .blur_sigma_px = 2.0});
  double a = 0.0, b = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    a += sharp.values()[n].real();
    b += soft.values()[n].real();
  }
  CHECK(b == doctest::Approx(a).epsilon(1e-12));
  CHECK(soft.at(32, 40).real() > 0.0);
}

TEST_CASE("raster errors") {
  const auto g = make_grid(16, 16, 1e-6, 1e-6);
  CHECK_THROWS_AS(raster_to_field(tiny_image(), g, {.pitch = 1.5e-6}), ConfigError);
  CHECK_THROWS_AS(raster_to_field(tiny_image(), g, {.pitch = 8e-6}), ConfigError);
  CHECK_THROWS_AS(raster_to_field(tiny_image(), g, {.pitch = 0.0}), ConfigError);
  const auto rect = make_grid(16, 16, 1e-6, 2e-6);
  CHECK_THROWS_AS(raster_to_field(tiny_image(), rect, {.pitch = 2e-6}), ConfigError);
}

TEST_CASE("letters image loads") {
  const auto g = make_grid(512, 512, 6.25e-6, 6.25e-6);
  const auto f = load_raster(testing::source_dir() / "data/eit_letters.pgm", g, {.pitch = 6.25e-6});
  CHECK(testing::max_abs(f) > 0.5);
  CHECK(f.at(0, 0) == 0.0);
}

TEST_CASE("band limit fraction") {
  const auto g = make_grid(512, 512, 8e-6, 8e-6);
  const double k0 = std::numbers::pi / 100e-6;
  // oracle: the continuous Gaussian spectrum exp(-k^2 w^2/2) sampled on the DFT grid
  const auto expected = [&](double w, double frac) {
    double above = 0.0, total = 0.0;
    for (std::size_t j = 0; j < g.ny(); ++j) {
      for (std::size_t i = 0; i < g.nx(); ++i) {
        const double k2 = g.kperp_sq(i, j);
        const double p = std::exp(-k2 * w * w / 2);
        total += p;
        if (k2 > frac * frac * k0 * k0) above += p;
      }
    }
    return above / total;
  };
  const auto wide = gaussian_beam(g, {.waist = 400e-6});
  const double fw = band_limit_report(wide, k0);
  CHECK(fw == doctest::Approx(expected(400e-6, 0.3)).epsilon(1e-6));
  CHECK(fw < 1e-2);
  const auto narrow = gaussian_beam(g, {.waist = 100e-6});
  const double fn = band_limit_report(narrow, k0);
  CHECK(fn == doctest::Approx(expected(100e-6, 0.3)).epsilon(1e-6));
  CHECK(fn > 0.5);
  CHECK(band_limit_report(narrow, k0, 1.0) == doctest::Approx(expected(100e-6, 1.0)).epsilon(1e-6));
  CHECK(band_limit_report(to_spectrum(narrow), k0) == fn);
  CHECK(band_limit_report(ComplexField(g), k0) == 0.0);
}
