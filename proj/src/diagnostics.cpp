#include "eitprop/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eitprop/errors.hpp"

namespace eitprop {
namespace {

struct Window {
  std::size_t i0, i1, j0, j1;  // inclusive-exclusive
};

Window full_window(const TransverseGrid& g) { return {0, g.nx(), 0, g.ny()}; }

// Samples on the window edge belong to it; the tolerance keeps that decision
// from depending on how x(i) - c rounds.
Window window_around(const TransverseGrid& g, Point c, double half) {
  half *= 1.0 + 1e-9;
  Window w{g.nx(), 0, g.ny(), 0};
  for (std::size_t i = 0; i < g.nx(); ++i) {
    if (std::abs(g.x(i) - c.x) <= half) {
      w.i0 = std::min(w.i0, i);
      w.i1 = std::max(w.i1, i + 1);
    }
  }
  for (std::size_t j = 0; j < g.ny(); ++j) {
    if (std::abs(g.y(j) - c.y) <= half) {
      w.j0 = std::min(w.j0, j);
      w.j1 = std::max(w.j1, j + 1);
    }
  }
  return w;
}

struct Moments {
  double power = 0.0;
  Point mean;
  double var_x = 0.0;
  double var_y = 0.0;
};

Moments moments(const ComplexField& f, const Window& w) {
  const auto& g = f.grid();
  Moments m;
  double sx = 0.0, sy = 0.0;
  for (std::size_t j = w.j0; j < w.j1; ++j) {
    for (std::size_t i = w.i0; i < w.i1; ++i) {
      const double p = std::norm(f.at(i, j));
      m.power += p;
      sx += p * g.x(i);
      sy += p * g.y(j);
    }
  }
  if (!(m.power > 0.0)) return m;
  m.mean = {sx / m.power, sy / m.power};
  // central moments in a second pass; robust to off-axis fields
  double vx = 0.0, vy = 0.0;
  for (std::size_t j = w.j0; j < w.j1; ++j) {
    const double dy = g.y(j) - m.mean.y;
    for (std::size_t i = w.i0; i < w.i1; ++i) {
      const double p = std::norm(f.at(i, j));
      const double dx = g.x(i) - m.mean.x;
      vx += p * dx * dx;
      vy += p * dy * dy;
    }
  }
  m.var_x = vx / m.power;
  m.var_y = vy / m.power;
  return m;
}

Moments nonzero_moments(const ComplexField& f, const Window& w, const char* where) {
  f.require(Representation::real_space, where);
  auto m = moments(f, w);
  if (!(m.power > 0.0)) throw ConfigError(std::string(where) + ": field has zero power");
  return m;
}

}  // namespace

double total_power(const ComplexField& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return s * f.grid().dx() * f.grid().dy();
}

Point centroid(const ComplexField& f) {
  return nonzero_moments(f, full_window(f.grid()), "centroid").mean;
}

double second_moment_width(const ComplexField& f, Axis axis) {
  const auto m = nonzero_moments(f, full_window(f.grid()), "second_moment_width");
  return 2.0 * std::sqrt(axis == Axis::x ? m.var_x : m.var_y);
}

double rayleigh_length(double w0, double q) { return 0.5 * q * w0 * w0; }

double gaussian_width_law(double w0, double q, double z) {
  if (!(w0 > 0.0)) throw ConfigError("gaussian_width_law: w0 must be > 0");
  const double r = z / rayleigh_length(w0, q);
  return w0 * std::sqrt(1.0 + r * r);
}

double default_half_window(std::span<const Point> centers) {
  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      min_sep = std::min(min_sep, std::hypot(centers[a].x - centers[b].x, centers[a].y - centers[b].y));
    }
  }
  return std::isfinite(min_sep) ? 0.5 * min_sep : 0.0;
}

std::vector<BeamWidth> per_beam_widths(const ComplexField& f, std::span<const Point> centers,
                                       double half_window) {
  const bool whole_grid = !(half_window > 0.0);
  if (!whole_grid) {
    // boxes overlap only if they intersect on both axes with positive extent
    const double tol = 1e-9 * half_window;
    for (std::size_t a = 0; a < centers.size(); ++a) {
      for (std::size_t b = a + 1; b < centers.size(); ++b) {
        if (std::abs(centers[a].x - centers[b].x) < 2.0 * half_window - tol &&
            std::abs(centers[a].y - centers[b].y) < 2.0 * half_window - tol) {
          throw ConfigError("per_beam_widths: windows around beams " + std::to_string(a) + " and " +
                            std::to_string(b) + " overlap");
        }
      }
    }
  } else if (centers.size() > 1) {
    throw ConfigError("per_beam_widths: a whole-grid window only works for a single beam");
  }

  std::vector<BeamWidth> out;
  out.reserve(centers.size());
  for (const auto& c : centers) {
    const auto w = whole_grid ? full_window(f.grid()) : window_around(f.grid(), c, half_window);
    const auto m = nonzero_moments(f, w, "per_beam_widths");
    out.push_back({m.mean, 2.0 * std::sqrt(m.var_x), 2.0 * std::sqrt(m.var_y)});
  }
  return out;
}

Profile cross_section(const ComplexField& f, Axis axis, bool normalize) {
  f.require(Representation::real_space, "cross_section");
  const auto& g = f.grid();
  Profile p;
  if (axis == Axis::x) {
    const std::size_t j = g.ny() / 2;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      p.coord.push_back(g.x(i));
      p.intensity.push_back(std::norm(f.at(i, j)));
    }
  } else {
    const std::size_t i = g.nx() / 2;
    for (std::size_t j = 0; j < g.ny(); ++j) {
      p.coord.push_back(g.y(j));
      p.intensity.push_back(std::norm(f.at(i, j)));
    }
  }
  if (normalize) {
    const double peak = *std::max_element(p.intensity.begin(), p.intensity.end());
    if (peak > 0.0) {
      for (auto& v : p.intensity) v /= peak;
    }
  }
  return p;
}

double image_fidelity(const ComplexField& in, const ComplexField& out) {
  in.require(Representation::real_space, "image_fidelity");
  out.require(Representation::real_space, "image_fidelity");
  if (!(in.grid() == out.grid())) throw UsageError("image_fidelity: fields on different grids");

  const auto normalized = [](const ComplexField& f) {
    std::vector<double> v(f.values().size());
    double peak = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
      v[n] = std::norm(f.values()[n]);
      peak = std::max(peak, v[n]);
    }
    if (!(peak > 0.0)) throw ConfigError("image_fidelity: field has zero power");
    double mean = 0.0;
    for (auto& x : v) {
      x /= peak;
      mean += x;
    }
    mean /= static_cast<double>(v.size());
    for (auto& x : v) x -= mean;
    return v;
  };
  const auto a = normalized(in);
  const auto b = normalized(out);
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    ab += a[n] * b[n];
    aa += a[n] * a[n];
    bb += b[n] * b[n];
  }
  if (!(aa > 0.0) || !(bb > 0.0)) return 0.0;  // a uniform map carries no pattern
  return ab / std::sqrt(aa * bb);
}

nlohmann::ordered_json to_json(const DiagnosticsReport& r) {
  nlohmann::ordered_json j;
  j["total_power"] = r.total_power;
  j["centroid_m"] = {r.centroid.x, r.centroid.y};
  j["width_x_m"] = r.width_x;
  j["width_y_m"] = r.width_y;
  auto beams = nlohmann::ordered_json::array();
  for (const auto& b : r.per_beam) {
    beams.push_back({{"center_m", {b.center.x, b.center.y}},
                     {"width_x_m", b.width_x},
                     {"width_y_m", b.width_y}});
  }
  j["per_beam"] = beams;
  j["transmission"] = r.transmission;
  j["log_transmission"] = r.log_transmission;
  if (r.fidelity) j["fidelity"] = *r.fidelity;
  return j;
}

}  // namespace eitprop
