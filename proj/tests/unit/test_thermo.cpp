#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diamag/errors.hpp"
#include "diamag/thermo.hpp"

using namespace diamag;

TEST_CASE("pressure") {
  CHECK(thermo::pressure_infty({1, 1, 0, 1}).value == 0.0);
  // mpmath references
  CHECK(thermo::pressure_infty({1, 0, 0.5, 1}).value == doctest::Approx(0.029352967075582916934).epsilon(1e-13));
  CHECK(thermo::pressure_infty({1, 1, 0.5, 1}).value == doctest::Approx(0.028376138022663776447).epsilon(1e-13));
  CHECK(thermo::pressure_infty({1, 1, 0.5, -1}).value == doctest::Approx(0.033295511453371796048).epsilon(1e-13));
  CHECK(thermo::pressure_infty({0.5, 2, 0.3, -1}).value == doctest::Approx(0.10874856687970493084).epsilon(1e-13));

  // Fermi and Bose differ first at order z^2
  const double z = 1e-3, b = 1.3, w = 0.8;
  const double diff = thermo::pressure_infty({b, w, z, 1}).value - thermo::pressure_infty({b, w, z, -1}).value;
  const double u = w * b;
  CHECK(diff == doctest::Approx(-(z * z) * std::pow(4 * std::numbers::pi * b, -1.5) * (u / std::sinh(u)) / b).epsilon(1e-2));

  CHECK_THROWS_AS(thermo::pressure_infty({1, 1, 1.0, 1}), ValidationError);
  CHECK_THROWS_AS(thermo::pressure_infty({1, 1, 0.5, 0}), ValidationError);
  CHECK_THROWS_AS(thermo::pressure_infty({-1, 1, 0.5, 1}), ValidationError);
}

TEST_CASE("susceptibilities") {
  const GasParams g{1, 1, 0.5, 1};
  CHECK(thermo::chi_infty(1, g).value == doctest::Approx(-0.0019292015245597716592).epsilon(1e-12));
  CHECK(thermo::chi_infty(2, g).value == doctest::Approx(-0.0018291038029529865776).epsilon(1e-12));
  CHECK(thermo::chi_infty(3, g).value == doctest::Approx(0.00031453856082647293874).epsilon(1e-11));
  CHECK(thermo::chi_infty(1, {1, 0, 0.5, 1}).value == 0.0);
  CHECK(thermo::chi_infty(3, {2, 0, 0.2, -1}).value == 0.0);
  CHECK(thermo::chi_infty(2, {1, 0, 0.5, 1}).value == doctest::Approx(-0.0019775740439976411218).epsilon(1e-12));

  const double h = 1e-3;
  const double fd = (thermo::pressure_infty({1, 1 + h, 0.5, 1}).value - thermo::pressure_infty({1, 1 - h, 0.5, 1}).value) / (2 * h);
  CHECK(thermo::chi_infty(1, g).value == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("tail bound") {
  const GasParams g{1, 0, 0.5, 1};
  CHECK(thermo::tail_bound(0, g, 40) <= 1e-13);
  for (int K = 1; K < 60; ++K) CHECK(thermo::tail_bound(2, g, K + 1) <= thermo::tail_bound(2, g, K));

  // oversummation: partial sums of the omega = 0 pressure against the full value
  const double full = thermo::pressure_infty(g).value;
  for (int K : {2, 5, 10, 20}) {
    double part = 0;
    for (int k = 1; k <= K; ++k) part += std::pow(-1, k + 1) * std::pow(0.5, k) * std::pow(k, -2.5);
    part *= std::pow(2 * std::numbers::pi, -1.5);
    CHECK(std::abs(full - part) <= thermo::tail_bound(0, g, K));
  }
}
