#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "eitprop/spectral.hpp"

namespace eitprop {

// Raw dump: little-endian float32, row-major, interleaved (re, im), no
// header. The JSON sidecar next to it (same stem, .json) carries nx, ny,
// dx, dy, z, units and the representation tag.

/// Writes `raw_path` and its sidecar; returns the sidecar path.
std::filesystem::path write_raw_field(const ComplexField& f, double z,
                                      const std::filesystem::path& raw_path);

struct RawFieldFile {
  ComplexField field;
  double z = 0.0;
};

/// Reads a dump written by write_raw_field (values are float32-rounded).
RawFieldFile read_raw_field(const std::filesystem::path& raw_path);

/// 8-bit grayscale image, row 0 at the top.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t col, std::size_t row) const { return pixels[row * width + col]; }
};

/// Binary PGM (P5) with maxval <= 255. Throws ConfigError otherwise.
GrayImage read_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(std::span<const std::uint8_t> bytes);

void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Maps a row-major intensity map (row 0 = lowest y) to an image with
/// +y up, scaling `scale_max` to 255.
GrayImage intensity_to_image(std::span<const double> intensity, std::size_t width,
                             std::size_t height, double scale_max);

}  // namespace eitprop
