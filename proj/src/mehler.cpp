#include "diamag/mehler.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "diamag/errors.hpp"

namespace diamag::mehler {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaclaurinOrder = 28;

// Maclaurin coefficients of u / sinh(u), reciprocal of sum u^{2k} / (2k+1)!.
const std::vector<double>& maclaurin_u_over_sinh() {
  static const std::vector<double> coeffs = [] {
    Jet s(kMaclaurinOrder, 1.0);
    double fact = 1.0;
    for (int k = 1; 2 * k <= kMaclaurinOrder; ++k) {
      fact *= (2.0 * k) * (2.0 * k + 1.0);
      s[2 * k] = 1.0 / fact;
    }
    return reciprocal(s).coefficients();
  }();
  return coeffs;
}

double gaussian_prefactor(double beta) { return std::pow(kTwoPi * beta, -1.5); }

}  // namespace

void validate(const KernelParams& p) {
  require(std::isfinite(p.beta) && p.beta > 0.0, "beta must be positive and finite");
  require(std::isfinite(p.omega) && p.omega >= 0.0, "omega must be non-negative and finite");
}

double u_over_sinh(double u) {
  u = std::abs(u);
  if (u < kSeriesSwitch) {
    const double u2 = u * u;
    return 1.0 + u2 * (-1.0 / 6.0 + u2 * (7.0 / 360.0 + u2 * (-31.0 / 15120.0 + u2 * 127.0 / 604800.0)));
  }
  if (u < 20.0) return u / std::sinh(u);
  const double e = std::exp(-u);
  return 2.0 * u * e / (1.0 - e * e);
}

double u_over_tanh(double u) {
  u = std::abs(u);
  if (u < kSeriesSwitch) {
    const double u2 = u * u;
    return 1.0 + u2 * (1.0 / 3.0 + u2 * (-1.0 / 45.0 + u2 * 2.0 / 945.0));
  }
  if (u < 20.0) return u / std::tanh(u);
  const double e2 = std::exp(-2.0 * u);
  return u * (1.0 + e2) / (1.0 - e2);
}

Jet u_over_sinh(const Jet& u) {
  if (std::abs(u[0]) < kSeriesSwitch) return compose(maclaurin_u_over_sinh(), u);
  if (u[0] < 20.0) return u / sinh(u);
  const Jet e = exp(-u);
  Jet den = -(e * e);
  den += 1.0;
  return (2.0 * u * e) / den;
}

double free_heat_kernel(const Point3& x, const Point3& y, double beta) {
  require(std::isfinite(beta) && beta > 0.0, "beta must be positive and finite");
  magcore::check_finite(x);
  magcore::check_finite(y);
  return gaussian_prefactor(beta) * std::exp(-(x - y).norm2() / (2.0 * beta));
}

ComplexKernelValue mehler_kernel(const Point3& x, const Point3& y, const KernelParams& p) {
  validate(p);
  const Point3 d = x - y;
  const double u = 0.5 * p.omega * p.beta;
  const double c = u_over_tanh(u);
  const double amp = gaussian_prefactor(p.beta) * u_over_sinh(u) *
                     std::exp(-(c * (d.x1 * d.x1 + d.x2 * d.x2) + d.x3 * d.x3) / (2.0 * p.beta));
  const double theta = p.omega * magcore::phase(x, y);
  if (theta == 0.0) return {amp, 0.0};
  return {amp * std::cos(theta), amp * std::sin(theta)};
}

double mehler_diag(const KernelParams& p) {
  validate(p);
  return gaussian_prefactor(p.beta) * u_over_sinh(0.5 * p.omega * p.beta);
}

OmegaJet diag_jet(int n, const KernelParams& p, int cap) {
  validate(p);
  require(n >= 0, "jet order must be non-negative");
  require(n <= cap, "jet order exceeds cap");
  const Jet u = Jet::variable(n, 0.5 * p.omega * p.beta, 0.5 * p.beta);
  Jet f = u_over_sinh(u) * gaussian_prefactor(p.beta);
  if (p.omega == 0.0)
    for (int k = 1; k <= n; k += 2) f[k] = 0.0;
  for (int k = 0; k <= n; ++k)
    if (!std::isfinite(f[k])) throw NumericalError("non-finite jet coefficient");
  return f;
}

std::array<std::complex<double>, 3> covariant_gradient(const Point3& x, const Point3& y,
                                                       const KernelParams& p) {
  const std::complex<double> g = mehler_kernel(x, y, p).value();
  const Point3 d = x - y;
  const Point3 ad = magcore::gauge_vector(d);
  const double c = u_over_tanh(0.5 * p.omega * p.beta);
  const std::complex<double> I(0.0, 1.0);
  return {(p.omega * ad.x1 - I * c * d.x1 / p.beta) * g,
          (p.omega * ad.x2 - I * c * d.x2 / p.beta) * g,
          (-I * d.x3 / p.beta) * g};
}

ComplexKernelValue r_infty(int i, const Point3& x, const Point3& y, const KernelParams& p) {
  require(i == 1 || i == 2, "regularized kernel index must be 1 or 2");
  const Point3 ad = magcore::gauge_vector(x - y);
  if (i == 1) {
    const auto grad = covariant_gradient(x, y, p);
    const std::complex<double> r = ad.x1 * grad[0] + ad.x2 * grad[1] + ad.x3 * grad[2];
    return {r.real(), r.imag()};
  }
  const ComplexKernelValue g = mehler_kernel(x, y, p);
  const double w = 0.5 * ad.norm2();
  return {w * g.re, w * g.im};
}

}  // namespace diamag::mehler
