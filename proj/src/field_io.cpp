#include "eitprop/field_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <string>

#include "eitprop/errors.hpp"

namespace eitprop {
namespace {

void put_le32(std::vector<char>& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
}

float get_le32(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return std::bit_cast<float>(bits);
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::filesystem::path write_raw_field(const ComplexField& f, double z,
                                      const std::filesystem::path& raw_path) {
  std::vector<char> buf;
  buf.reserve(f.values().size() * 8);
  for (const auto& v : f.values()) {
    put_le32(buf, static_cast<float>(v.real()));
    put_le32(buf, static_cast<float>(v.imag()));
  }
  {
    std::ofstream out(raw_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + raw_path.string() + "'");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }

  const auto& g = f.grid();
  nlohmann::ordered_json meta;
  meta["format"] = "float32le-interleaved-complex";
  meta["nx"] = g.nx();
  meta["ny"] = g.ny();
  meta["dx"] = g.dx();
  meta["dy"] = g.dy();
  meta["z"] = z;
  meta["units"] = "m";
  meta["representation"] =
      f.representation() == Representation::real_space ? "real_space" : "spectral";
  auto sidecar = raw_path;
  sidecar.replace_extension(".json");
  std::ofstream out(sidecar);
  if (!out) throw std::runtime_error("cannot write '" + sidecar.string() + "'");
  out << meta.dump(2) << '\n';
  return sidecar;
}

RawFieldFile read_raw_field(const std::filesystem::path& raw_path) {
  auto sidecar = raw_path;
  sidecar.replace_extension(".json");
  std::ifstream meta_in(sidecar);
  if (!meta_in) throw ConfigError("missing sidecar '" + sidecar.string() + "'");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad sidecar '" + sidecar.string() + "': " + e.what());
  }
  const auto nx = meta.at("nx").get<std::size_t>();
  const auto ny = meta.at("ny").get<std::size_t>();
  const auto grid = make_grid(nx, ny, meta.at("dx").get<double>(), meta.at("dy").get<double>());
  const auto rep_tag = meta.at("representation").get<std::string>();
  Representation rep;
  if (rep_tag == "real_space") {
    rep = Representation::real_space;
  } else if (rep_tag == "spectral") {
    rep = Representation::spectral;
  } else {
    throw ConfigError("bad representation tag '" + rep_tag + "' in " + sidecar.string());
  }

  const auto bytes = slurp(raw_path);
  if (bytes.size() != nx * ny * 8) {
    throw ConfigError("raw dump '" + raw_path.string() + "' has " + std::to_string(bytes.size()) +
                      " bytes, expected " + std::to_string(nx * ny * 8));
  }
  std::vector<std::complex<double>> values(nx * ny);
  for (std::size_t n = 0; n < values.size(); ++n) {
    values[n] = {get_le32(&bytes[8 * n]), get_le32(&bytes[8 * n + 4])};
  }
  return RawFieldFile{ComplexField(grid, std::move(values), rep), meta.value("z", 0.0)};
}

GrayImage parse_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  // header tokens are separated by whitespace; '#' starts a comment line
  const auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (std::isspace(bytes[pos])) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
      tok.push_back(static_cast<char>(bytes[pos++]));
    }
    return tok;
  };
  const auto number = [&](const char* what) {
    const auto tok = next_token();
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("pgm: bad ") + what + " '" + tok + "'");
    }
  };

  const auto magic = next_token();
  if (magic != "P5") {
    throw ConfigError("pgm: unsupported format (magic '" + magic + "', expected binary P5)");
  }
  GrayImage img;
  img.width = number("width");
  img.height = number("height");
  const auto maxval = number("maxval");
  if (maxval > 255) throw ConfigError("pgm: only 8-bit images are supported (maxval <= 255)");
  img.maxval = static_cast<int>(maxval);
  // exactly one whitespace byte separates the header from the raster
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw ConfigError("pgm: truncated header");
  ++pos;
  const std::size_t count = img.width * img.height;
  if (bytes.size() - pos < count) throw ConfigError("pgm: truncated raster");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  try {
    return parse_pgm(bytes);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "P5\n" << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

GrayImage intensity_to_image(std::span<const double> intensity, std::size_t width,
                             std::size_t height, double scale_max) {
  GrayImage img{width, height, 255, std::vector<std::uint8_t>(width * height, 0)};
  if (!(scale_max > 0.0)) return img;
  for (std::size_t row = 0; row < height; ++row) {
    const std::size_t j = height - 1 - row;
    for (std::size_t i = 0; i < width; ++i) {
      const double v = std::clamp(intensity[j * width + i] / scale_max, 0.0, 1.0);
      img.pixels[row * width + i] = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
  }
  return img;
}

}  // namespace eitprop
