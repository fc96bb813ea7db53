#include <doctest.h>

#include <cmath>

#include "diamag/jet.hpp"

using namespace diamag;

TEST_CASE("jet arithmetic") {
  const Jet x = Jet::variable(6, 0.3);
  const Jet e = exp(x);
  for (int k = 0; k <= 6; ++k) CHECK(e.derivative(k) == doctest::Approx(std::exp(0.3)));

  Jet s, c;
  sinh_cosh(x, s, c);
  CHECK(s.derivative(3) == doctest::Approx(std::cosh(0.3)));
  CHECK(c.derivative(4) == doctest::Approx(std::cosh(0.3)));

  const Jet r = reciprocal(x + 1.0);  // 1/(1+x)
  CHECK(r.derivative(3) == doctest::Approx(-6.0 / std::pow(1.3, 4)));
  const Jet q = (x * x) / (x + 1.0);
  CHECK(q[0] == doctest::Approx(0.09 / 1.3));
  CHECK(q.eval(0.1) == doctest::Approx(0.16 / 1.4).epsilon(1e-6));
}

TEST_CASE("jet composition") {
  // exp series composed with a jet equals exp of the jet
  std::vector<double> series(20);
  double f = 1;
  for (int p = 0; p < 20; ++p) {
    series[p] = 1.0 / f;
    f *= p + 1;
  }
  const Jet x = Jet::variable(5, 0.0, 0.5);
  const Jet a = compose(series, x), b = exp(x);
  for (int k = 0; k <= 5; ++k) CHECK(a[k] == doctest::Approx(b[k]));
}
