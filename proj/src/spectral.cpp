#include "eitprop/spectral.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "eitprop/errors.hpp"

namespace eitprop {

double TransverseGrid::dkx() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(nx_) * dx_);
}

double TransverseGrid::dky() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(ny_) * dy_);
}

double TransverseGrid::kx(std::size_t i) const {
  const double n = i < nx_ / 2 ? static_cast<double>(i)
                                : static_cast<double>(i) - static_cast<double>(nx_);
  return n * dkx();
}

double TransverseGrid::ky(std::size_t j) const {
  const double n = j < ny_ / 2 ? static_cast<double>(j)
                                : static_cast<double>(j) - static_cast<double>(ny_);
  return n * dky();
}

TransverseGrid make_grid(std::size_t nx, std::size_t ny, double dx, double dy) {
  if (nx < 16 || ny < 16 || !std::has_single_bit(nx) || !std::has_single_bit(ny)) {
    throw ConfigError("grid: nx and ny must be powers of two >= 16 (got " +
                      std::to_string(nx) + " x " + std::to_string(ny) + ")");
  }
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw ConfigError("grid: pitch dx, dy must be > 0");
  }
  return TransverseGrid(nx, ny, dx, dy);
}

ComplexField::ComplexField(const TransverseGrid& grid, Representation rep)
    : grid_(grid), values_(grid.size()), rep_(rep) {}

ComplexField::ComplexField(const TransverseGrid& grid, std::vector<std::complex<double>> values,
                           Representation rep)
    : grid_(grid), values_(std::move(values)), rep_(rep) {
  if (values_.size() != grid_.size()) {
    throw UsageError("ComplexField: value count does not match grid size");
  }
}

ComplexField& ComplexField::operator*=(std::complex<double> c) {
  for (auto& v : values_) v *= c;
  return *this;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  if (!(other.grid_ == grid_) || other.rep_ != rep_) {
    throw UsageError("ComplexField: adding fields with different grids or representations");
  }
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += other.values_[n];
  return *this;
}

void ComplexField::require(Representation rep, const char* where) const {
  if (rep_ != rep) {
    throw UsageError(std::string(where) + ": expected a " +
                     (rep == Representation::real_space ? "real-space" : "spectral") +
                     " field");
  }
}

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (shape, sign) under a lock and are
// unaligned so the result never depends on where std::vector put the data.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t nx, std::size_t ny, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(nx, ny, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(nx * ny);
    auto* out = fftw_alloc_complex(nx * ny);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("fftw: failed to create plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

ComplexField transform(const ComplexField& f, int sign, Representation result) {
  const auto& g = f.grid();
  ComplexField out(g, result);
  fftw_plan plan = plan_cache().get(g.nx(), g.ny(), sign);
  // std::complex<double> is layout-compatible with fftw_complex
  auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(f.values().data()));
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.values().data());
  fftw_execute_dft(plan, in_ptr, out_ptr);
  out *= 1.0 / std::sqrt(static_cast<double>(g.size()));
  return out;
}

}  // namespace

ComplexField to_spectrum(const ComplexField& f) {
  f.require(Representation::real_space, "to_spectrum");
  return transform(f, FFTW_FORWARD, Representation::spectral);
}

ComplexField to_real(const ComplexField& f) {
  f.require(Representation::spectral, "to_real");
  return transform(f, FFTW_BACKWARD, Representation::real_space);
}

}  // namespace eitprop
