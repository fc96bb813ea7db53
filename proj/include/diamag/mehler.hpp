#pragma once

#include <array>
#include <complex>

#include "diamag/jet.hpp"
#include "diamag/magcore.hpp"

namespace diamag {

struct KernelParams {
  double beta = 1.0;
  double omega = 0.0;
};

struct ComplexKernelValue {
  double re = 0.0;
  double im = 0.0;

  std::complex<double> value() const { return {re, im}; }
  double modulus() const { return std::abs(value()); }
};

using OmegaJet = Jet;

namespace mehler {

inline constexpr int kJetOrderCap = 12;
inline constexpr double kSeriesSwitch = 1e-4;

void validate(const KernelParams& p);

// u / sinh(u) and u / tanh(u) with small-u series and overflow-free large-u forms.
double u_over_sinh(double u);
double u_over_tanh(double u);
Jet u_over_sinh(const Jet& u);

double free_heat_kernel(const Point3& x, const Point3& y, double beta);

ComplexKernelValue mehler_kernel(const Point3& x, const Point3& y, const KernelParams& p);

double mehler_diag(const KernelParams& p);

OmegaJet diag_jet(int n, const KernelParams& p, int cap = kJetOrderCap);

// (i grad_x + omega a(x)) G(x, y)
std::array<std::complex<double>, 3> covariant_gradient(const Point3& x, const Point3& y,
                                                       const KernelParams& p);

ComplexKernelValue r_infty(int i, const Point3& x, const Point3& y, const KernelParams& p);

}  // namespace mehler
}  // namespace diamag
