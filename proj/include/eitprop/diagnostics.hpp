#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "eitprop/spectral.hpp"

namespace eitprop {

enum class Axis { x, y };

/// Sum |values|^2 dx dy. Unitary transforms make this representation-independent.
double total_power(const ComplexField& f);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Intensity-weighted centroid of a real-space field.
Point centroid(const ComplexField& f);

/// 2*sigma of the intensity distribution along `axis`, so a Gaussian
/// exp(-r^2/w0^2) reports w0. Throws ConfigError for zero power.
double second_moment_width(const ComplexField& f, Axis axis);

/// w0*sqrt(1 + z^2/zR^2) with zR = q*w0^2/2.
double gaussian_width_law(double w0, double q, double z);
double rayleigh_length(double w0, double q);

struct BeamWidth {
  Point center;  ///< intensity centroid inside the window
  double width_x = 0.0;
  double width_y = 0.0;
};

/// Second-moment widths of the sub-field inside a square window of
/// half-width `half_window` around each center. Windows may touch but not
/// overlap; throws ConfigError otherwise.
std::vector<BeamWidth> per_beam_widths(const ComplexField& f, std::span<const Point> centers,
                                       double half_window);

/// Default half-window: half the smallest center separation, or unbounded
/// (0 is returned as "whole grid") for a single beam.
double default_half_window(std::span<const Point> centers);

struct Profile {
  std::vector<double> coord;
  std::vector<double> intensity;
};

/// |values|^2 along the y = 0 row (axis x) or x = 0 column (axis y),
/// optionally scaled to unit maximum.
Profile cross_section(const ComplexField& f, Axis axis, bool normalize);

/// Zero-lag Pearson correlation of the two peak-normalized intensity maps.
double image_fidelity(const ComplexField& in, const ComplexField& out);

struct DiagnosticsReport {
  double total_power = 0.0;
  Point centroid;
  double width_x = 0.0;
  double width_y = 0.0;
  std::vector<BeamWidth> per_beam;
  double transmission = 0.0;      ///< power(out)/power(in), including any factored background
  double log_transmission = 0.0;  ///< ln of the above; finite even when transmission underflows
  std::optional<double> fidelity;
};

nlohmann::ordered_json to_json(const DiagnosticsReport& r);

}  // namespace eitprop
