#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diamag/dyson.hpp"
#include "diamag/errors.hpp"

using namespace diamag;

TEST_CASE("compositions") {
  using V = std::vector<int>;
  const auto c1 = dyson::enumerate_compositions(1);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].parts == V{1});
  const auto c2 = dyson::enumerate_compositions(2);
  REQUIRE(c2.size() == 2);
  CHECK(c2[0].parts == V{2});
  CHECK(c2[1].parts == V{1, 1});
  const auto c3 = dyson::enumerate_compositions(3);
  REQUIRE(c3.size() == 3);
  CHECK(c3[2].parts == V{1, 1, 1});
  CHECK(dyson::enumerate_compositions(4).size() == 5);
  CHECK(dyson::enumerate_compositions(5).size() == 8);
  CHECK_THROWS_AS(dyson::enumerate_compositions(13), ValidationError);
}

TEST_CASE("simplex sampling") {
  std::mt19937_64 g(5);
  const auto s1 = dyson::sample_simplex(1, 2.0, g);
  CHECK(s1.weight == doctest::Approx(2.0));
  double mean = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto s = dyson::sample_simplex(2, 1.0, g);
    CHECK(s.times[0] > s.times[1]);
    mean += s.times[0] / n;
  }
  CHECK(std::abs(mean - 2.0 / 3.0) < 3 * std::sqrt(1.0 / 18 / n) + 1e-12);
}

TEST_CASE("f_k calibration") {
  CHECK(dyson::fk_closed_form(1, 3.0) == doctest::Approx(std::numbers::pi));
  CHECK(dyson::fk_closed_form(2, 1.0) == doctest::Approx(2 * std::numbers::pi));
  CHECK(dyson::fk_closed_form(3, 4.0) == doctest::Approx(4 * std::numbers::pi * std::numbers::pi));
  for (int k = 1; k <= 3; ++k)
    CHECK(dyson::fk_deterministic(k, 1.3, 24) == doctest::Approx(dyson::fk_closed_form(k, 1.3)).epsilon(1e-10));
  for (int k = 2; k <= 5; ++k) {
    const auto r = dyson::fk_monte_carlo(k, 1.0, 200000, 9);
    CHECK(std::abs(r.value - dyson::fk_closed_form(k, 1.0)) <= 3 * r.std_error);
  }
}

TEST_CASE("chain integrand") {
  const KernelParams p{1.0, 0.6};
  const Point3 x{0.2, -0.1, 0.3};
  std::mt19937_64 g(1);
  const auto s = dyson::sample_simplex(1, 1.0, g);
  CHECK(std::abs(dyson::chain_integrand({{2}, 2}, 0, x, {x}, s, p)) == 0.0);
  CHECK(std::abs(dyson::chain_integrand({{2}, 2}, 1, x, {Point3{1, 2, 0}}, s, p)) == 0.0);
}

TEST_CASE("exact chain integral matches jet assembly") {
  QuadratureSpec q;
  q.mode = QuadratureMode::deterministic;
  // second derivative at omega = 0 from the single (2) chain and the (1,1) chain
  const auto r = dyson::assemble_derivative(2, {1.0, 0.0}, q);
  CHECK(r.value == doctest::Approx(-std::pow(2 * std::numbers::pi, -1.5) / 12).epsilon(1e-10));
  for (double w : {0.3, 1.0, 2.5})
    for (int n = 1; n <= 3; ++n) {
      const KernelParams p{0.7, w};
      const auto a = dyson::assemble_derivative(n, p, q);
      CHECK(a.value == doctest::Approx(mehler::diag_jet(n, p).derivative(n)).epsilon(1e-9));
      CHECK(std::abs(a.imag) < 1e-12);
    }
}

TEST_CASE("Monte Carlo assembly") {
  QuadratureSpec q;
  q.sample_count = 20000;
  q.seed = 4;
  const KernelParams p{1.0, 1.0};
  const auto r = dyson::assemble_derivative(2, p, q);
  CHECK(std::abs(r.value - mehler::diag_jet(2, p).derivative(2)) <= 3 * r.std_error);
  CHECK(dyson::assemble_derivative(1, {1.0, 0.0}, q).value == 0.0);

  // x-independence
  const auto rx = dyson::assemble_derivative(2, p, q, {3, -2, 1});
  CHECK(std::abs(rx.value - r.value) <= 3 * std::hypot(r.std_error, rx.std_error));

  // worker count does not change the estimate
  q.worker_count = 3;
  CHECK(dyson::assemble_derivative(2, p, q).value == r.value);

  q.sample_count = 10;
  CHECK_THROWS_AS(dyson::assemble_derivative(2, p, q), ValidationError);
  q.sample_count = 1000;
  CHECK_THROWS_AS(dyson::assemble_derivative(5, p, q), ValidationError);
}

TEST_CASE("Monte Carlo variants agree") {
  const KernelParams p{1.0, 0.5};
  const double ref = mehler::diag_jet(3, p).derivative(3);
  QuadratureSpec q;
  q.sample_count = 20000;
  q.antithetic = true;
  auto r = dyson::assemble_derivative(3, p, q);
  CHECK(std::abs(r.value - ref) <= 3 * r.std_error);
  q.antithetic = false;
  q.pilot_allocation = true;
  r = dyson::assemble_derivative(3, p, q);
  CHECK(std::abs(r.value - ref) <= 3 * r.std_error);
  q.pilot_allocation = false;
  q.proposal_dilation = 2.0;
  r = dyson::assemble_derivative(3, p, q);
  CHECK(std::abs(r.value - ref) <= 3 * r.std_error);
}
