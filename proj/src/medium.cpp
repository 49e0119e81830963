#include "eitprop/medium.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "eitprop/errors.hpp"

namespace eitprop {

void MediumParams::validate() const {
  const auto fail = [](const std::string& what) { throw ConfigError("medium: " + what); };
  if (!(std::isfinite(alpha) && std::isfinite(gamma_p) && std::isfinite(gamma) &&
        std::isfinite(diffusion) && std::isfinite(delta))) {
    fail("all parameters must be finite");
  }
  if (alpha < 0.0) fail("alpha must be >= 0");
  if (gamma_p < 0.0) fail("gamma_p must be >= 0");
  if (gamma <= 0.0) fail("gamma must be > 0");
  if (gamma < gamma_p) fail("gamma must be >= gamma_p (gamma = gamma_p + decoherence)");
  if (diffusion <= 0.0) fail("diffusion must be > 0");
}

OpticalParams OpticalParams::from_wavelength(double wavelength) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw ConfigError("optics: wavelength must be > 0");
  }
  return OpticalParams{wavelength, 2.0 * std::numbers::pi / wavelength};
}

std::complex<double> chi(const MediumParams& m, double kperp_sq) {
  using namespace std::complex_literals;
  const std::complex<double> denom{m.gamma + m.diffusion * kperp_sq, -m.delta};
  return 1i * m.alpha * (1.0 - m.gamma_p / denom);
}

std::complex<double> chi0(const MediumParams& m) { return chi(m, 0.0); }

ExpansionCoefficients quadratic_expansion(const MediumParams& m) {
  const auto c0 = chi0(m);
  const double g2 = m.gamma * m.gamma;
  const double d2 = m.delta * m.delta;
  const double norm = (g2 + d2) * (g2 + d2);
  const double pre = m.alpha * m.gamma_p * m.gamma;
  return ExpansionCoefficients{
      .im0 = c0.imag(),
      .re0 = c0.real(),
      .c_im = pre * (g2 - d2) / norm,
      .c_re = -pre * (2.0 * m.gamma * m.delta) / norm,
  };
}

double dicke_width_k0(const MediumParams& m) { return std::sqrt(m.gamma / m.diffusion); }

double group_velocity(const MediumParams& m) {
  if (m.alpha == 0.0 || m.gamma_p == 0.0) {
    throw ConfigError("group velocity undefined for alpha = 0 or gamma_p = 0");
  }
  return m.gamma * m.gamma / (m.alpha * m.gamma_p);
}

double absorption_kappa(const MediumParams& m) { return 2.0 * chi0(m).imag(); }

double check_cancellation(const MediumParams& m, const OpticalParams& o) {
  return o.carrier_wavenumber * m.alpha * m.gamma_p * m.diffusion / (m.gamma * m.gamma) - 1.0;
}

MediumParams design_medium(const DesignTargets& t) {
  if (!(t.k0 > 0.0) || !std::isfinite(t.k0)) throw ConfigError("design: k0 must be > 0");
  if (!(t.gamma_over_gamma_p >= 1.0)) {
    throw ConfigError("design: gamma_over_gamma_p must be >= 1");
  }
  const auto optics = OpticalParams::from_wavelength(t.wavelength);
  const double k0_sq = t.k0 * t.k0;

  double diffusion = 0.0;
  double gamma = 0.0;
  if (t.diffusion && t.gamma) {
    const double implied = *t.diffusion * k0_sq;
    if (std::abs(implied - *t.gamma) > 1e-12 * std::abs(*t.gamma)) {
      std::ostringstream msg;
      msg << "design: conflicting anchors (diffusion, gamma): gamma = " << *t.gamma
          << " 1/s but diffusion*k0^2 = " << implied << " 1/s";
      throw ConfigError(msg.str());
    }
    diffusion = *t.diffusion;
    gamma = *t.gamma;
  } else if (t.diffusion) {
    diffusion = *t.diffusion;
    gamma = diffusion * k0_sq;
  } else if (t.gamma) {
    gamma = *t.gamma;
    diffusion = gamma / k0_sq;
  } else {
    throw ConfigError("design: one of diffusion or gamma must be given as an anchor");
  }
  if (!(diffusion > 0.0) || !(gamma > 0.0)) {
    throw ConfigError("design: anchors must be positive");
  }

  MediumParams m;
  m.diffusion = diffusion;
  m.gamma = gamma;
  m.gamma_p = gamma / t.gamma_over_gamma_p;
  // alpha*gamma_p = gamma^2/(q*D)
  m.alpha = gamma * gamma / (optics.carrier_wavenumber * diffusion * m.gamma_p);
  m.delta = -gamma;
  m.validate();
  return m;
}

}  // namespace eitprop
