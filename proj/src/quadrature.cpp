#include "diamag/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "diamag/errors.hpp"

namespace diamag::quad {

namespace {

// Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes, weights from first components.
Rule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigensolve failed");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

template <class T, class F>
T simplex_sum(int j, double beta, int npts, const F& f) {
  require(j >= 1, "simplex dimension must be at least 1");
  require(beta > 0.0, "beta must be positive");
  require(npts >= 1, "need at least one quadrature point per dimension");
  const Rule r = gauss_legendre(npts, 0.0, 0.5 * std::numbers::pi);
  std::vector<double> v(npts), dv(npts);
  for (int a = 0; a < npts; ++a) {
    const double s = std::sin(r.nodes[a]);
    v[a] = s * s;
    dv[a] = std::sin(2.0 * r.nodes[a]) * r.weights[a];
  }
  std::vector<int> idx(j, 0);
  std::vector<double> gaps(j + 1);
  T total{};
  while (true) {
    double rest = beta, w = 1.0;
    for (int i = 0; i < j; ++i) {
      const double vi = v[idx[i]];
      gaps[i] = rest * vi;
      w *= rest * dv[idx[i]];
      rest *= 1.0 - vi;
    }
    gaps[j] = rest;
    total += w * f(gaps);
    int d = j - 1;
    while (d >= 0 && ++idx[d] == npts) idx[d--] = 0;
    if (d < 0) break;
  }
  return total;
}

}  // namespace

Rule gauss_legendre(int n) {
  require(n >= 1, "Gauss-Legendre needs n >= 1");
  if (n == 1) return {{0.0}, {2.0}};
  Eigen::VectorXd b(n - 1);
  for (int k = 1; k < n; ++k) b(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(b, 2.0);
}

Rule gauss_legendre(int n, double a, double b) {
  Rule r = gauss_legendre(n);
  const double h = 0.5 * (b - a), c = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = c + h * r.nodes[i];
    r.weights[i] *= h;
  }
  return r;
}

Rule gauss_hermite(int n) {
  require(n >= 1, "Gauss-Hermite needs n >= 1");
  if (n == 1) return {{0.0}, {std::sqrt(std::numbers::pi)}};
  Eigen::VectorXd b(n - 1);
  for (int k = 1; k < n; ++k) b(k - 1) = std::sqrt(0.5 * k);
  return golub_welsch(b, std::sqrt(std::numbers::pi));
}

double integrate_simplex(int j, double beta, int points_per_dim,
                         const std::function<double(const std::vector<double>&)>& f) {
  return simplex_sum<double>(j, beta, points_per_dim, f);
}

std::complex<double> integrate_simplex_complex(
    int j, double beta, int points_per_dim,
    const std::function<std::complex<double>(const std::vector<double>&)>& f) {
  return simplex_sum<std::complex<double>>(j, beta, points_per_dim, f);
}

}  // namespace diamag::quad
