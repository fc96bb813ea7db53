#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diamag/quadrature.hpp"

using namespace diamag;

TEST_CASE("Gauss rules") {
  const auto gl = quad::gauss_legendre(10, 0.0, 2.0);
  double s = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 19);
  CHECK(s == doctest::Approx(std::pow(2.0, 20) / 20));

  const auto gh = quad::gauss_hermite(20);
  double m0 = 0, m4 = 0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    m0 += gh.weights[i];
    m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
  }
  CHECK(m0 == doctest::Approx(std::sqrt(std::numbers::pi)));
  CHECK(m4 == doctest::Approx(0.75 * std::sqrt(std::numbers::pi)));
}

TEST_CASE("simplex integration") {
  // volume of D_j(beta) is beta^j / j!
  for (int j = 1; j <= 4; ++j) {
    const double v = quad::integrate_simplex(j, 1.5, 8, [](const std::vector<double>&) { return 1.0; });
    CHECK(v == doctest::Approx(std::pow(1.5, j) / std::tgamma(j + 1.0)));
  }
  // Dirichlet integral of g0 * g1 over the 1-simplex
  const double d = quad::integrate_simplex(1, 1.0, 8, [](const std::vector<double>& g) { return g[0] * g[1]; });
  CHECK(d == doctest::Approx(1.0 / 6));
}
