#include "eitprop/propagator.hpp"

#include <cmath>
#include <string>

#include "eitprop/errors.hpp"
#include "eitprop/parallel.hpp"

namespace eitprop {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_distance(double z, const char* where) {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw ConfigError(std::string(where) + ": propagation distance must be finite and >= 0");
  }
}

std::complex<double> kernel_value(const PropagationMode& mode, const OpticalParams& optics,
                                  double kperp_sq, double z, std::complex<double> chi_offset) {
  using namespace std::complex_literals;
  const auto c = mode_chi(mode, kperp_sq) - chi_offset;
  return std::exp(1i * (c - kperp_sq / (2.0 * optics.carrier_wavenumber)) * z);
}

std::complex<double> offset_for(const PropagationMode& mode, Background background) {
  return background == Background::factor_out ? mode_chi(mode, 0.0) : std::complex<double>{};
}

// Shared by propagate and propagate_slices so both paths are bit-identical.
ComplexField apply(const ComplexField& spectrum, const PropagationMode& mode,
                   const OpticalParams& optics, double z, Background background) {
  ComplexField out = spectrum;
  const auto& g = out.grid();
  const auto offset = offset_for(mode, background);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      out.at(i, j) *= kernel_value(mode, optics, g.kperp_sq(i, j), z, offset);
    }
  }
  return to_real(out);
}

}  // namespace

std::complex<double> mode_chi(const PropagationMode& mode, double kperp_sq) {
  return std::visit(overloaded{
                        [](const FreeSpace&) { return std::complex<double>{}; },
                        [&](const EitMedium& e) { return chi(e.medium, kperp_sq); },
                        [](const UniformChi& u) { return u.chi; },
                    },
                    mode);
}

std::complex<double> background_exponent(const PropagationMode& mode, double z) {
  using namespace std::complex_literals;
  return 1i * mode_chi(mode, 0.0) * z;
}

ComplexField transfer_function(const PropagationMode& mode, const OpticalParams& optics,
                               const TransverseGrid& grid, double z, Background background) {
  check_distance(z, "transfer_function");
  ComplexField h(grid, Representation::spectral);
  const auto offset = offset_for(mode, background);
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      h.at(i, j) = kernel_value(mode, optics, grid.kperp_sq(i, j), z, offset);
    }
  }
  return h;
}

ComplexField propagate(const ComplexField& f, const PropagationMode& mode,
                       const OpticalParams& optics, double z, Background background) {
  f.require(Representation::real_space, "propagate");
  check_distance(z, "propagate");
  if (z == 0.0) return f;
  return apply(to_spectrum(f), mode, optics, z, background);
}

void PropagationPlan::validate() const {
  for (std::size_t n = 0; n < slices.size(); ++n) {
    if (!(slices[n] >= 0.0) || !std::isfinite(slices[n])) {
      throw ConfigError("plan: slice positions must be finite and >= 0");
    }
    if (n > 0 && !(slices[n] > slices[n - 1])) {
      throw ConfigError("plan: slice positions must be strictly increasing");
    }
  }
}

PropagationPlan PropagationPlan::uniform(double z, std::size_t count) {
  if (count == 0) throw ConfigError("plan: slice count must be >= 1");
  PropagationPlan plan;
  plan.slices.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) {
    plan.slices.push_back(n == count ? z : z * static_cast<double>(n) / static_cast<double>(count));
  }
  plan.validate();
  return plan;
}

std::vector<ComplexField> propagate_slices(const ComplexField& f, const PropagationMode& mode,
                                           const OpticalParams& optics,
                                           const PropagationPlan& plan, Background background,
                                           unsigned threads) {
  f.require(Representation::real_space, "propagate_slices");
  plan.validate();
  const auto spectrum = to_spectrum(f);
  std::vector<ComplexField> out(plan.slices.size(), ComplexField(f.grid()));
  parallel_for(plan.slices.size(), threads, [&](std::size_t n) {
    const double z = plan.slices[n];
    out[n] = z == 0.0 ? f : apply(spectrum, mode, optics, z, background);
  });
  return out;
}

}  // namespace eitprop
