#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace eitprop {

/// Uniformly sampled transverse plane and its conjugate k axes.
///
/// Real-space sample i sits at x = (i - nx/2)*dx, so the optical axis is the
/// sample at index nx/2. The k axes follow the usual DFT layout: bin i holds
/// kx = 2*pi*i/(nx*dx) for i < nx/2 and 2*pi*(i - nx)/(nx*dx) otherwise.
class TransverseGrid {
 public:
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  std::size_t size() const { return nx_ * ny_; }

  double x(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(nx_ / 2)) * dx_; }
  double y(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(ny_ / 2)) * dy_; }
  double dkx() const;
  double dky() const;
  double kx(std::size_t i) const;
  double ky(std::size_t j) const;
  double kperp_sq(std::size_t i, std::size_t j) const {
    const double a = kx(i);
    const double b = ky(j);
    return a * a + b * b;
  }

  bool operator==(const TransverseGrid&) const = default;

 private:
  friend TransverseGrid make_grid(std::size_t, std::size_t, double, double);
  TransverseGrid(std::size_t nx, std::size_t ny, double dx, double dy)
      : nx_(nx), ny_(ny), dx_(dx), dy_(dy) {}

  std::size_t nx_;
  std::size_t ny_;
  double dx_;
  double dy_;
};

/// nx, ny must be powers of two >= 16 and dx, dy > 0; throws ConfigError otherwise.
TransverseGrid make_grid(std::size_t nx, std::size_t ny, double dx, double dy);

enum class Representation { real_space, spectral };

/// Complex envelope on a grid, row-major (ny rows of nx samples). The carrier
/// exp(i(wt - qz)) is never stored.
class ComplexField {
 public:
  explicit ComplexField(const TransverseGrid& grid,
                        Representation rep = Representation::real_space);
  ComplexField(const TransverseGrid& grid, std::vector<std::complex<double>> values,
               Representation rep);

  const TransverseGrid& grid() const { return grid_; }
  Representation representation() const { return rep_; }

  std::span<std::complex<double>> values() { return values_; }
  std::span<const std::complex<double>> values() const { return values_; }

  std::complex<double>& at(std::size_t i, std::size_t j) { return values_[j * grid_.nx() + i]; }
  const std::complex<double>& at(std::size_t i, std::size_t j) const {
    return values_[j * grid_.nx() + i];
  }

  ComplexField& operator*=(std::complex<double> c);
  ComplexField& operator+=(const ComplexField& other);

  void require(Representation rep, const char* where) const;

 private:
  TransverseGrid grid_;
  std::vector<std::complex<double>> values_;
  Representation rep_;
};

/// Unitary forward transform with kernel exp(-i k.r). Sum of |values|^2 is preserved.
ComplexField to_spectrum(const ComplexField& f);

/// Inverse of to_spectrum.
ComplexField to_real(const ComplexField& f);

}  // namespace eitprop
