#pragma once

#include <complex>
#include <optional>

namespace eitprop {

/// Atomic and optical-pumping parameters of the EIT vapor, SI units.
///
/// alpha is half the pump-off intensity absorption coefficient [1/m],
/// gamma_p the power broadening [1/s], gamma the total homogeneous EIT
/// width (gamma_p plus ground-state decoherence) [1/s], diffusion the atomic
/// diffusion coefficient [m^2/s] and delta the signed Raman detuning [1/s].
/// The one-photon detuning is taken as zero.
struct MediumParams {
  double alpha = 0.0;
  double gamma_p = 0.0;
  double gamma = 0.0;
  double diffusion = 0.0;
  double delta = 0.0;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  bool operator==(const MediumParams&) const = default;
};

/// Carrier description. Only q = 2*pi/lambda enters the propagation.
struct OpticalParams {
  double wavelength = 0.0;
  double carrier_wavenumber = 0.0;

  static OpticalParams from_wavelength(double wavelength);

  bool operator==(const OpticalParams&) const = default;
};

/// Small-k expansion of chi in powers of k^2/k0^2:
///   chi ~ (re0 + i im0) + (c_re + i c_im) k^2/k0^2 + O(k^4).
struct ExpansionCoefficients {
  double im0 = 0.0;
  double re0 = 0.0;
  double c_im = 0.0;
  double c_re = 0.0;
};

/// Motional susceptibility i*alpha*(1 - gamma_p/(gamma + D*k^2 - i*delta)),
/// parameterized by |k_perp|^2 so it is isotropic by construction.
std::complex<double> chi(const MediumParams& m, double kperp_sq);

/// Susceptibility of an atom at rest; identical to chi(m, 0).
std::complex<double> chi0(const MediumParams& m);

ExpansionCoefficients quadratic_expansion(const MediumParams& m);

/// Width of the Dicke-narrowed line in k space, sqrt(gamma/D).
double dicke_width_k0(const MediumParams& m);

/// gamma^2/(alpha*gamma_p). Throws ConfigError when alpha or gamma_p is zero.
double group_velocity(const MediumParams& m);

/// Intensity absorption per unit length, 2*Im chi0. At delta = -gamma this
/// is 2*alpha*(1 - gamma_p/(2*gamma)).
double absorption_kappa(const MediumParams& m);

/// q*alpha*gamma_p*D/gamma^2 - 1; zero when the k^2 dispersion of the
/// medium exactly cancels paraxial diffraction (equivalently v_g = q*D).
double check_cancellation(const MediumParams& m, const OpticalParams& o);

/// Inputs for the diffraction-cancellation back-solver. Exactly one of
/// diffusion/gamma is needed as an anchor; when both are given they must
/// satisfy gamma = D*k0^2.
struct DesignTargets {
  double wavelength = 0.0;
  double k0 = 0.0;
  double gamma_over_gamma_p = 2.0;
  std::optional<double> diffusion;
  std::optional<double> gamma;

  bool operator==(const DesignTargets&) const = default;
};

/// Returns a medium at delta = -gamma (where the k^2 absorption term
/// vanishes) with dicke_width_k0 == targets.k0 and a zero cancellation
/// residual. Throws ConfigError on missing or conflicting anchors.
MediumParams design_medium(const DesignTargets& targets);

}  // namespace eitprop
