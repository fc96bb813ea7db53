#include "diamag/jet.hpp"

#include <algorithm>
#include <cmath>

#include "diamag/errors.hpp"

namespace diamag {

Jet::Jet(int order, double value) : c_(static_cast<std::size_t>(order) + 1, 0.0) {
  require(order >= 0, "jet order must be non-negative");
  c_[0] = value;
}

Jet Jet::variable(int order, double x0, double slope) {
  Jet j(order, x0);
  if (order >= 1) j.c_[1] = slope;
  return j;
}

double Jet::derivative(int k) const {
  return std::tgamma(k + 1.0) * c_.at(k);
}

double Jet::eval(double dx) const {
  double r = 0.0;
  for (int k = order(); k >= 0; --k) r = r * dx + c_[k];
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  const int n = std::min(order(), o.order());
  c_.resize(n + 1);
  for (int k = 0; k <= n; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  const int n = std::min(order(), o.order());
  c_.resize(n + 1);
  for (int k = 0; k <= n; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  Jet r(n);
  for (int k = 0; k <= n; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
    r.c_[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  if (b.c_[0] == 0.0) throw NumericalError("jet division by zero leading coefficient");
  Jet q(n);
  for (int k = 0; k <= n; ++k) {
    double s = a.c_[k];
    for (int i = 1; i <= k; ++i) s -= b.c_[i] * q.c_[k - i];
    q.c_[k] = s / b.c_[0];
  }
  return q;
}

Jet reciprocal(const Jet& a) { return Jet(a.order(), 1.0) / a; }

Jet exp(const Jet& a) {
  const int n = a.order();
  Jet e(n, std::exp(a[0]));
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a[i] * e[k - i];
    e[k] = s / k;
  }
  return e;
}

void sinh_cosh(const Jet& a, Jet& s, Jet& c) {
  const int n = a.order();
  s = Jet(n, std::sinh(a[0]));
  c = Jet(n, std::cosh(a[0]));
  for (int k = 1; k <= n; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int i = 1; i <= k; ++i) {
      ss += i * a[i] * c[k - i];
      cc += i * a[i] * s[k - i];
    }
    s[k] = ss / k;
    c[k] = cc / k;
  }
}

Jet sinh(const Jet& a) {
  Jet s, c;
  sinh_cosh(a, s, c);
  return s;
}

Jet compose(const std::vector<double>& series, const Jet& a) {
  Jet r(a.order(), 0.0);
  for (auto it = series.rbegin(); it != series.rend(); ++it) {
    r = r * a;
    r += *it;
  }
  return r;
}

}  // namespace diamag
