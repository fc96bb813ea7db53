#include <doctest.h>

#include <random>

#include "diamag/errors.hpp"
#include "diamag/magcore.hpp"

using namespace diamag;

TEST_CASE("gauge vector") {
  CHECK(magcore::gauge_vector({0, 0, 0}) == Point3{0, 0, 0});
  CHECK(magcore::gauge_vector({1, 0, 0}) == Point3{0, 0.5, 0});
  CHECK(magcore::gauge_vector({2, -4, 7}) == Point3{2, 1, 0});
}

TEST_CASE("phase") {
  CHECK(magcore::phase({1, 0, 0}, {0, 1, 0}) == doctest::Approx(-0.5));
  CHECK(magcore::phase({0.3, -1.2, 4}, {0.3, -1.2, 4}) == 0.0);
  CHECK(magcore::phase({0, 0, 5}, {0, 0, -3}) == 0.0);
  CHECK_THROWS_AS(magcore::phase({NAN, 0, 0}, {0, 0, 0}), ValidationError);
}

TEST_CASE("triangle flux") {
  CHECK(magcore::tri_flux({0, 0, 0}, {1, 0, 0}, {1, 1, 0}) == doctest::Approx(-0.5));
  CHECK(magcore::tri_flux({0.4, 2, 1}, {1, -3, 0}, {1, -3, 0}) == 0.0);

  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(-4, 4);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const Point3 x{u(g), u(g), u(g)}, y{u(g), u(g), u(g)}, z{u(g), u(g), u(g)};
    const double t = magcore::tri_flux(x, y, z);
    worst = std::max(worst, std::abs(t - magcore::tri_flux_phases(x, y, z)));
    worst = std::max(worst, std::abs(t - magcore::tri_flux(y, z, x)));
    worst = std::max(worst, std::abs(t - magcore::tri_flux(z, x, y)));
    CHECK(std::abs(t) <= 0.5 * (x - y).norm() * (y - z).norm() + 1e-12);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("chain flux") {
  CHECK(magcore::path_flux({{1, 2, 3}, {{4, -1, 0}}}) == 0.0);
  const FluxChain c{{0, 0, 0}, {{1, 0, 0}, {1, 1, 0}}};
  CHECK(magcore::path_flux(c) == doctest::Approx(-0.5));
  CHECK(magcore::path_flux_phases(c) == doctest::Approx(-0.5));

  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 500; ++trial) {
    FluxChain ch{{u(g), u(g), u(g)}, {}};
    for (int k = 0; k < 1 + trial % 6; ++k) ch.nodes.push_back({u(g), u(g), u(g)});
    const Point3 t{u(g), u(g), u(g)};
    FluxChain sh = ch;
    sh.base += t;
    for (auto& n : sh.nodes) n += t;
    const double f = magcore::path_flux(ch);
    CHECK(f == doctest::Approx(magcore::path_flux(sh)).epsilon(1e-10).scale(10));
    CHECK(f == doctest::Approx(magcore::path_flux_phases(ch)).epsilon(1e-10).scale(10));
    CHECK(std::abs(f) <= magcore::path_flux_bound(ch) + 1e-12);
  }
}
