#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "diamag/errors.hpp"
#include "diamag/mehler.hpp"

using namespace diamag;

namespace {
const double kDiag = std::pow(2 * std::numbers::pi, -1.5);
}

TEST_CASE("free heat kernel") {
  CHECK(mehler::free_heat_kernel({1, 2, 3}, {1, 2, 3}, 1.0) == doctest::Approx(0.0634936359342410));
  CHECK(mehler::free_heat_kernel({1, 0, 0}, {0, 0, 0}, 2.0) ==
        doctest::Approx(std::pow(4 * std::numbers::pi, -1.5) * std::exp(-0.25)));
  CHECK_THROWS_AS(mehler::free_heat_kernel({0, 0, 0}, {0, 0, 0}, 0.0), ValidationError);
}

TEST_CASE("mehler kernel and diagonal") {
  CHECK(mehler::mehler_kernel({0.5, 0.5, 0}, {0.5, 0.5, 0}, {1, 0}).re == doctest::Approx(kDiag));
  const auto g = mehler::mehler_kernel({1, -2, 0}, {1, -2, 0}, {1, 2});
  CHECK(g.re == doctest::Approx(kDiag / std::sinh(1.0)));
  CHECK(g.im == doctest::Approx(0.0));
  CHECK(mehler::mehler_diag({1, 0}) == doctest::Approx(kDiag));
  CHECK(mehler::mehler_diag({1, 2}) == doctest::Approx(0.0540295).epsilon(1e-4));
  CHECK(mehler::mehler_diag({1, 1e6}) == 0.0);
  CHECK(std::isfinite(mehler::mehler_diag({1e-3, 1e5})));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3), b(0.1, 5), w(0, 10);
  for (int i = 0; i < 10000; ++i) {
    const Point3 x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)};
    const KernelParams p{b(rng), w(rng)};
    CHECK(mehler::mehler_kernel(x, y, p).modulus() <= mehler::free_heat_kernel(x, y, p.beta) * (1 + 1e-15));
    if (i % 100 == 0)
      CHECK(mehler::mehler_diag(p) == doctest::Approx(mehler::mehler_kernel(x, x, p).re).epsilon(1e-14));
  }
}

TEST_CASE("u/sinh u branches are continuous") {
  for (double u : {1e-4, 20.0}) {
    CHECK(mehler::u_over_sinh(u * (1 - 1e-12)) == doctest::Approx(mehler::u_over_sinh(u * (1 + 1e-12))).epsilon(1e-11));
    CHECK(mehler::u_over_tanh(u * (1 - 1e-12)) == doctest::Approx(mehler::u_over_tanh(u * (1 + 1e-12))).epsilon(1e-11));
  }
  CHECK(mehler::u_over_sinh(700.0) == doctest::Approx(1400.0 * std::exp(-700.0)));
  CHECK(mehler::u_over_sinh(800.0) == 0.0);
}

TEST_CASE("diagonal jet") {
  const auto j0 = mehler::diag_jet(2, {1, 0});
  CHECK(j0[0] == doctest::Approx(kDiag));
  CHECK(j0[1] == 0.0);
  CHECK(j0[2] == doctest::Approx(-kDiag / 24));
  CHECK(j0.derivative(2) == doctest::Approx(-0.0052911).epsilon(1e-4));
  CHECK(mehler::diag_jet(3, {2.5, 0}).derivative(3) == 0.0);

  // mpmath references
  const double b1w07[] = {0.062215597889656021697, -0.0035999459927981019406, -0.0048517362105134325153,
                          0.0012154716094223198736, 0.0015133384364904608539};
  const double b2w3[] = {0.006722500658565258892, -0.0045150767462094010246, 0.0023525311012063578091,
                         -0.0003033483557942203231, -0.0014681999721601094771};
  const auto ja = mehler::diag_jet(4, {1, 0.7}), jb = mehler::diag_jet(4, {2, 3});
  for (int n = 0; n <= 4; ++n) {
    CHECK(ja.derivative(n) == doctest::Approx(b1w07[n]).epsilon(1e-12));
    CHECK(jb.derivative(n) == doctest::Approx(b2w3[n]).epsilon(1e-12));
  }
  // small-u series region of the jet
  const auto js = mehler::diag_jet(4, {1, 1e-5});
  CHECK(js.derivative(2) == doctest::Approx(-kDiag / 12).epsilon(1e-8));

  CHECK_THROWS_AS(mehler::diag_jet(13, {1, 1}), ValidationError);
  CHECK_THROWS_AS(mehler::diag_jet(-1, {1, 1}), ValidationError);
}

TEST_CASE("R kernels") {
  const KernelParams p{0.8, 1.3};
  const Point3 x{0.3, -0.4, 0.2};
  CHECK(mehler::r_infty(1, x, x, p).modulus() == 0.0);
  CHECK(mehler::r_infty(2, x, x, p).modulus() == 0.0);

  const Point3 y{-0.5, 0.6, -0.1};
  const double a2 = magcore::gauge_vector(x - y).norm2();
  CHECK(mehler::r_infty(2, x, y, p).modulus() ==
        doctest::Approx(0.5 * a2 * mehler::mehler_kernel(x, y, p).modulus()));

  // covariant gradient against central differences of the kernel in x
  const double h = 1e-5;
  const auto cg = mehler::covariant_gradient(x, y, p);
  const std::complex<double> I(0, 1);
  const Point3 a = magcore::gauge_vector(x);
  const Point3 e[3] = {{h, 0, 0}, {0, h, 0}, {0, 0, h}};
  const double ac[3] = {a.x1, a.x2, a.x3};
  for (int k = 0; k < 3; ++k) {
    const auto d = (mehler::mehler_kernel(x + e[k], y, p).value() - mehler::mehler_kernel(x - e[k], y, p).value()) / (2 * h);
    const auto expect = I * d + p.omega * ac[k] * mehler::mehler_kernel(x, y, p).value();
    CHECK(std::abs(cg[k] - expect) <= 1e-6 * std::abs(expect) + 1e-12);
  }
}
