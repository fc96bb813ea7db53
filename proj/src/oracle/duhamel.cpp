#include <algorithm>
#include <cmath>
#include <numbers>

#include "diamag/errors.hpp"
#include "diamag/oracle.hpp"
#include "diamag/quadrature.hpp"

namespace diamag::oracle {

namespace {

using cd = std::complex<double>;

int nearest_node(const BoxSpec& b, double x) {
  const int i = static_cast<int>(std::lround((x + 0.5 * b.side) / b.spacing() - 1.0));
  return std::clamp(i, 0, b.transverse_grid - 1);
}

// Transverse factor of the Mehler kernel (with phase) between planar points.
cd mehler_transverse(double x1, double x2, double y1, double y2, double tau, double omega) {
  const double u = 0.5 * omega * tau;
  const double c = mehler::u_over_tanh(u);
  const double d1 = x1 - y1, d2 = x2 - y2;
  const double amp = mehler::u_over_sinh(u) / (2.0 * std::numbers::pi * tau) *
                     std::exp(-c * (d1 * d1 + d2 * d2) / (2.0 * tau));
  return std::polar(amp, omega * 0.5 * (y1 * x2 - y2 * x1));
}

double gauss1(double d, double t) {
  return std::exp(-d * d / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

}  // namespace

DuhamelResult duhamel(const SpectralData& s, const Point3& x, const Point3& xp,
                      const KernelParams& p, const DuhamelOptions& opt) {
  mehler::validate(p);
  require(s.has_vectors(), "boundary representation needs eigenvectors");
  const BoxSpec& b = s.box;
  const int n = b.transverse_grid;
  const double h = s.spacing, L = b.side, half = 0.5 * L;
  for (const Point3* q : {&x, &xp}) {
    magcore::check_finite(*q);
    const double m = 2.0 * h;
    require(std::abs(q->x1) <= half - m && std::abs(q->x2) <= half - m && std::abs(q->x3) <= half - m,
            "points must be at least two grid cells from the boundary");
  }
  const int ix = nearest_node(b, x.x1), jx = nearest_node(b, x.x2);
  const int ip = nearest_node(b, xp.x1), jp = nearest_node(b, xp.x2);
  const Point3 X{grid_coordinate(b, ix), grid_coordinate(b, jx), x.x3};
  const Point3 XP{grid_coordinate(b, ip), grid_coordinate(b, jp), xp.x3};

  DuhamelResult r;
  r.lhs = heat_kernel_L_nodes(s, ix, jx, X.x3, ip, jp, XP.x3, p.beta) -
          mehler::mehler_kernel(X, XP, p).value();

  const int rp = ip + n * jp;
  const Eigen::VectorXcd vrow = s.eigenvectors.row(rp).conjugate().transpose();
  const quad::Rule tq = quad::gauss_legendre(opt.time_points, 0.0, p.beta);
  const quad::Rule zq = quad::gauss_legendre(opt.longitudinal_points, -half, half);
  auto F = [&](const Eigen::VectorXcd& f, int i, int j) { return f(i + n * j); };

  cd total = 0.0;
  for (std::size_t a = 0; a < tq.nodes.size(); ++a) {
    const double tau = tq.nodes[a], t = p.beta - tau;
    Eigen::VectorXcd coef(vrow.size());
    for (Eigen::Index k = 0; k < coef.size(); ++k) coef(k) = std::exp(-t * s.eigenvalues(k)) * vrow(k);
    const Eigen::VectorXcd f = s.eigenvectors * coef / (h * h);

    double i3 = 0.0;
    for (std::size_t q = 0; q < zq.nodes.size(); ++q)
      i3 += zq.weights[q] * gauss1(X.x3 - zq.nodes[q], tau) * dirichlet_kernel_1d(L, zq.nodes[q], XP.x3, t);

    cd side = 0.0;
    for (int k = 0; k < n; ++k) {
      const double c = grid_coordinate(b, k);
      const cd dn_xp = (-4.0 * F(f, n - 1, k) + F(f, n - 2, k)) / (2.0 * h);
      const cd dn_xm = -(4.0 * F(f, 0, k) - F(f, 1, k)) / (2.0 * h);
      const cd dn_yp = (-4.0 * F(f, k, n - 1) + F(f, k, n - 2)) / (2.0 * h);
      const cd dn_ym = -(4.0 * F(f, k, 0) - F(f, k, 1)) / (2.0 * h);
      side += mehler_transverse(X.x1, X.x2, half, c, tau, p.omega) * dn_xp +
              mehler_transverse(X.x1, X.x2, -half, c, tau, p.omega) * dn_xm +
              mehler_transverse(X.x1, X.x2, c, half, tau, p.omega) * dn_yp +
              mehler_transverse(X.x1, X.x2, c, -half, tau, p.omega) * dn_ym;
    }
    side *= h * i3;

    cd plane = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        plane += mehler_transverse(X.x1, X.x2, grid_coordinate(b, i), grid_coordinate(b, j), tau,
                                   p.omega) * F(f, i, j);
    plane *= h * h;
    const double top = gauss1(X.x3 - half, tau) * dirichlet_kernel_1d_da(L, half, XP.x3, t);
    const double bottom = -gauss1(X.x3 + half, tau) * dirichlet_kernel_1d_da(L, -half, XP.x3, t);

    total += tq.weights[a] * (side + plane * (top + bottom));
  }
  r.rhs = 0.5 * total;
  r.residual = std::abs(r.lhs - r.rhs) / std::abs(r.lhs);
  return r;
}

double duhamel_residual(const BoxSpec& b, const Point3& x, const Point3& xp, const KernelParams& p) {
  const SpectralData s = spectrum(build_hamiltonian(b, p.omega), {.vectors = true, .use_symmetry = true});
  return duhamel(s, x, xp, p).residual;
}

}  // namespace diamag::oracle
