#pragma once

#include <cmath>
#include <vector>

namespace diamag {

struct Point3 {
  double x1 = 0, x2 = 0, x3 = 0;

  Point3() = default;
  constexpr Point3(double a, double b, double c) : x1(a), x2(b), x3(c) {}

  Point3& operator+=(const Point3& o) { x1 += o.x1; x2 += o.x2; x3 += o.x3; return *this; }
  Point3& operator-=(const Point3& o) { x1 -= o.x1; x2 -= o.x2; x3 -= o.x3; return *this; }
  friend Point3 operator+(Point3 a, const Point3& b) { return a += b; }
  friend Point3 operator-(Point3 a, const Point3& b) { return a -= b; }
  friend Point3 operator*(double s, const Point3& a) { return {s * a.x1, s * a.x2, s * a.x3}; }
  friend bool operator==(const Point3&, const Point3&) = default;

  double dot(const Point3& o) const { return x1 * o.x1 + x2 * o.x2 + x3 * o.x3; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  bool finite() const { return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3); }
};

struct FluxChain {
  Point3 base;
  std::vector<Point3> nodes;
};

namespace magcore {

void check_finite(const Point3& p);

// a(x) = (1/2) e3 ^ x
Point3 gauge_vector(const Point3& p);

// phi(x, y) = (1/2) e3 . (y ^ x)
double phase(const Point3& x, const Point3& y);

// (1/2) e3 . ((x - y) ^ (z - y))
double tri_flux(const Point3& x, const Point3& y, const Point3& z);

// Sum of phases phi(x,y) + phi(y,z) + phi(z,x); equals tri_flux.
double tri_flux_phases(const Point3& x, const Point3& y, const Point3& z);

// Fl_n as a sum of triangle fluxes fanned from the base point.
double path_flux(const FluxChain& c);

// Fl_n as phi(y_n, x) + sum_k phi(y_k, y_{k+1}) with y_0 = x.
double path_flux_phases(const FluxChain& c);

// Right-hand side of the chain flux estimate.
double path_flux_bound(const FluxChain& c);

}  // namespace magcore
}  // namespace diamag
