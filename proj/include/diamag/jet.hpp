#pragma once

#include <vector>

namespace diamag {

// Truncated univariate Taylor polynomial; c[k] = (1/k!) d^k f.
class Jet {
 public:
  Jet() : c_(1, 0.0) {}
  explicit Jet(int order, double value = 0.0);

  static Jet variable(int order, double x0, double slope = 1.0);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  const std::vector<double>& coefficients() const { return c_; }

  // k-th derivative, k! * c[k]
  double derivative(int k) const;
  double eval(double dx) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s) { c_[0] += s; return *this; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator-(const Jet& a) { return a * -1.0; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

 private:
  std::vector<double> c_;
};

Jet reciprocal(const Jet& a);
Jet exp(const Jet& a);
void sinh_cosh(const Jet& a, Jet& s, Jet& c);
Jet sinh(const Jet& a);

// sum_p series[p] * a^p, Horner form.
Jet compose(const std::vector<double>& series, const Jet& a);

}  // namespace diamag
