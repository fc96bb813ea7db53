#include "diamag/magcore.hpp"

#include "diamag/errors.hpp"

namespace diamag::magcore {

namespace {
double cross3(const Point3& a, const Point3& b) { return a.x1 * b.x2 - a.x2 * b.x1; }
}  // namespace

void check_finite(const Point3& p) {
  require(p.finite(), "non-finite point coordinate");
}

Point3 gauge_vector(const Point3& p) {
  check_finite(p);
  return {-0.5 * p.x2, 0.5 * p.x1, 0.0};
}

double phase(const Point3& x, const Point3& y) {
  check_finite(x);
  check_finite(y);
  return 0.5 * cross3(y, x);
}

double tri_flux(const Point3& x, const Point3& y, const Point3& z) {
  check_finite(x);
  check_finite(y);
  check_finite(z);
  return 0.5 * cross3(x - y, z - y);
}

double tri_flux_phases(const Point3& x, const Point3& y, const Point3& z) {
  return phase(x, y) + phase(y, z) + phase(z, x);
}

double path_flux(const FluxChain& c) {
  require(!c.nodes.empty(), "flux chain needs at least one node");
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < c.nodes.size(); ++k)
    s += tri_flux(c.base, c.nodes[k], c.nodes[k + 1]);
  return s;
}

double path_flux_phases(const FluxChain& c) {
  require(!c.nodes.empty(), "flux chain needs at least one node");
  if (c.nodes.size() == 1) return 0.0;
  double s = phase(c.nodes.back(), c.base) + phase(c.base, c.nodes.front());
  for (std::size_t k = 0; k + 1 < c.nodes.size(); ++k) s += phase(c.nodes[k], c.nodes[k + 1]);
  return s;
}

double path_flux_bound(const FluxChain& c) {
  require(!c.nodes.empty(), "flux chain needs at least one node");
  const std::size_t n = c.nodes.size();
  auto y = [&](std::size_t i) -> const Point3& { return i == 0 ? c.base : c.nodes[i - 1]; };
  double total = 0.0;
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    double inner = 0.0;
    for (std::size_t l = 1; l <= k; ++l) inner += (y(l - 1) - y(l)).norm();
    total += inner * (y(k) - y(k + 1)).norm();
  }
  return total;
}

}  // namespace diamag::magcore
