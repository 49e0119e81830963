#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eitprop/errors.hpp"
#include "eitprop/spectral.hpp"
#include "support.hpp"

using namespace eitprop;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

// brute-force unitary DFT over array indices, kernel exp(-2 pi i (m n/N))
ComplexField naive_dft(const ComplexField& f) {
  const auto& g = f.grid();
  ComplexField out(g, Representation::spectral);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (std::size_t v = 0; v < g.ny(); ++v) {
    for (std::size_t u = 0; u < g.nx(); ++u) {
      long double re = 0, im = 0;
      for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
          const long double ph = -2.0L * std::numbers::pi_v<long double> *
                                 (static_cast<long double>(u * i % g.nx()) / g.nx() +
                                  static_cast<long double>(v * j % g.ny()) / g.ny());
          const cd x = f.at(i, j);
          re += x.real() * std::cos(ph) - x.imag() * std::sin(ph);
          im += x.real() * std::sin(ph) + x.imag() * std::cos(ph);
        }
      }
      out.at(u, v) = cd(static_cast<double>(re), static_cast<double>(im)) * scale;
    }
  }
  return out;
}

double sum_sq(const ComplexField& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return s;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(make_grid(16, 16, 1e-6, 1e-6));
  CHECK_THROWS_AS(make_grid(8, 16, 1e-6, 1e-6), ConfigError);
  CHECK_THROWS_AS(make_grid(48, 16, 1e-6, 1e-6), ConfigError);
  CHECK_THROWS_AS(make_grid(16, 16, 0.0, 1e-6), ConfigError);
  CHECK_THROWS_AS(make_grid(16, 16, 1e-6, -1.0), ConfigError);
}

TEST_CASE("grid coordinates") {
  const auto g = make_grid(32, 16, 2.0, 0.5);
  CHECK(g.x(16) == 0.0);
  CHECK(g.y(8) == 0.0);
  CHECK(g.x(0) == -32.0);
  CHECK(g.dkx() == doctest::Approx(2 * pi / 64));
  CHECK(g.kx(0) == 0.0);
  CHECK(g.kx(15) == doctest::Approx(15 * 2 * pi / 64));
  CHECK(g.kx(16) == doctest::Approx(-16 * 2 * pi / 64));
  CHECK(g.kx(31) == doctest::Approx(-2 * pi / 64));
  CHECK(g.ky(15) == doctest::Approx(-2 * pi / 8));
}

TEST_CASE("transform agrees with the brute-force DFT") {
  const auto g = make_grid(16, 32, 1.0, 1.0);
  const auto f = testing::random_field(g, 42);
  const auto fast = to_spectrum(f);
  const auto slow = naive_dft(f);
  CHECK(testing::max_abs_diff(fast, slow) < 1e-12 * testing::max_abs(slow));
}

TEST_CASE("Parseval and round trip") {
  const auto g = make_grid(128, 64, 1e-6, 2e-6);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = testing::random_field(g, seed);
    const auto F = to_spectrum(f);
    CHECK(std::abs(sum_sq(F) / sum_sq(f) - 1) < 1e-12);
    const auto back = to_real(F);
    CHECK(testing::max_abs_diff(back, f) < 1e-12 * testing::max_abs(f));
    CHECK(back.representation() == Representation::real_space);
  }
}

TEST_CASE("transform leaves its input untouched") {
  const auto g = make_grid(32, 32, 1.0, 1.0);
  const auto f = testing::random_field(g, 9);
  const auto copy = f;
  (void)to_spectrum(f);
  CHECK(testing::max_abs_diff(f, copy) == 0.0);
}

TEST_CASE("real input has a Hermitian spectrum") {
  const auto g = make_grid(32, 16, 1.0, 1.0);
  auto f = testing::random_field(g, 5);
  for (auto& v : f.values()) v = v.real();
  const auto F = to_spectrum(f);
  for (std::size_t v = 0; v < g.ny(); ++v) {
    for (std::size_t u = 0; u < g.nx(); ++u) {
      const auto mirror = F.at((g.nx() - u) % g.nx(), (g.ny() - v) % g.ny());
      CHECK(std::abs(F.at(u, v) - std::conj(mirror)) < 1e-12);
    }
  }
}

TEST_CASE("shift theorem") {
  const auto g = make_grid(32, 32, 0.5, 0.25);
  const auto f = testing::random_field(g, 17);
  const std::size_t a = 5, b = 3;
  ComplexField shifted(g);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      shifted.at((i + a) % g.nx(), (j + b) % g.ny()) = f.at(i, j);
    }
  }
  const auto F = to_spectrum(f);
  const auto S = to_spectrum(shifted);
  for (std::size_t v = 0; v < g.ny(); ++v) {
    for (std::size_t u = 0; u < g.nx(); ++u) {
      const double ph = -(g.kx(u) * a * g.dx() + g.ky(v) * b * g.dy());
      CHECK(std::abs(S.at(u, v) - F.at(u, v) * std::polar(1.0, ph)) < 1e-12);
    }
  }
}

TEST_CASE("stripes and checkerboard peak where expected") {
  const auto g = make_grid(64, 64, 1e-6, 1e-6);
  const double p = 8e-6;
  const double kp = 2 * pi / p;

  ComplexField stripes(g);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) stripes.at(i, j) = std::cos(kp * g.x(i));
  }
  const auto S = to_spectrum(stripes);
  double best = 0.0;
  double kbest = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      if (std::abs(S.at(i, j)) > best) {
        best = std::abs(S.at(i, j));
        kbest = std::sqrt(g.kperp_sq(i, j));
      }
    }
  }
  CHECK(kbest == doctest::Approx(kp).epsilon(1e-12));

  // a checkerboard of period p peaks at (+-kp, +-kp): |k| = sqrt(2) kp, each component kp
  ComplexField board(g);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) board.at(i, j) = ((i / 4 + j / 4) % 2 == 0) ? 1.0 : -1.0;
  }
  const auto B = to_spectrum(board);
  best = 0.0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      if (std::abs(B.at(i, j)) > best + 1e-9) {
        best = std::abs(B.at(i, j));
        bi = i;
        bj = j;
      }
    }
  }
  CHECK(std::abs(g.kx(bi)) == doctest::Approx(kp).epsilon(1e-12));
  CHECK(std::abs(g.ky(bj)) == doctest::Approx(kp).epsilon(1e-12));
  CHECK(std::sqrt(g.kperp_sq(bi, bj)) == doctest::Approx(std::sqrt(2.0) * kp).epsilon(1e-12));
}

TEST_CASE("representation is enforced") {
  const auto g = make_grid(16, 16, 1.0, 1.0);
  ComplexField f(g);
  CHECK_THROWS_AS(to_real(f), UsageError);
  const auto F = to_spectrum(f);
  CHECK_THROWS_AS(to_spectrum(F), UsageError);
  CHECK_THROWS_AS(f += F, UsageError);
  CHECK_THROWS_AS(ComplexField(g, std::vector<cd>(3), Representation::real_space), UsageError);
}
