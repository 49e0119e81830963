#include <doctest.h>

#include <array>

#include "eitprop/errors.hpp"
#include "eitprop/units.hpp"

using namespace eitprop;

TEST_CASE("diffusivity in cm^2/s") {
  CHECK(parse_quantity("11 cm^2/s", Dimension::diffusivity) == doctest::Approx(1.1e-3).epsilon(1e-15));
  CHECK(parse_quantity("11cm^2/s", Dimension::diffusivity) == doctest::Approx(1.1e-3).epsilon(1e-15));
  CHECK(parse_quantity("0.5 m^2/s", Dimension::diffusivity) == 0.5);
}

TEST_CASE("lengths") {
  CHECK(parse_quantity("795 nm", Dimension::length) == doctest::Approx(795e-9).epsilon(1e-15));
  CHECK(parse_quantity("100 um", Dimension::length) == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(parse_quantity("100 \xC2\xB5m", Dimension::length) == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(parse_quantity("3.2 mm", Dimension::length) == doctest::Approx(3.2e-3).epsilon(1e-15));
  CHECK(parse_quantity("2 cm", Dimension::length) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(parse_quantity("1e-3", Dimension::length) == 1e-3);
  CHECK(parse_quantity("  -4 um ", Dimension::length) == doctest::Approx(-4e-6).epsilon(1e-15));
}

TEST_CASE("rates are plain 1/s") {
  CHECK(parse_quantity("1 MHz", Dimension::rate) == 1e6);
  CHECK(parse_quantity("2.5 kHz", Dimension::rate) == 2500.0);
  CHECK(parse_quantity("7 1/s", Dimension::rate) == 7.0);
  CHECK(parse_quantity("7 s^-1", Dimension::rate) == 7.0);
}

TEST_CASE("inverse lengths and speeds") {
  CHECK(parse_quantity("3 1/cm", Dimension::inverse_length) == doctest::Approx(300.0).epsilon(1e-15));
  CHECK(parse_quantity("3 cm^-1", Dimension::inverse_length) == doctest::Approx(300.0).epsilon(1e-15));
  CHECK(parse_quantity("9 km/s", Dimension::speed) == 9000.0);
}

TEST_CASE("run-time units") {
  const std::array<NamedUnit, 2> extra{NamedUnit{"w0", Dimension::length, 1e-4},
                                       NamedUnit{"zR", Dimension::length, 0.04}};
  CHECK(parse_quantity("1.5 w0", Dimension::length, extra) == doctest::Approx(1.5e-4).epsilon(1e-15));
  CHECK(parse_quantity("4 zR", Dimension::length, extra) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK_THROWS_AS(parse_quantity("4 zR", Dimension::rate, extra), ConfigError);
}

TEST_CASE("bad quantities") {
  CHECK_THROWS_AS(parse_quantity("11 cm^2/s", Dimension::length), ConfigError);
  CHECK_THROWS_AS(parse_quantity("3 parsecs", Dimension::length), ConfigError);
  CHECK_THROWS_AS(parse_quantity("fast", Dimension::speed), ConfigError);
  CHECK_THROWS_AS(parse_quantity("", Dimension::length), ConfigError);
  CHECK_THROWS_AS(parse_quantity("1 w0", Dimension::length), ConfigError);
}
