#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace diamag::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1].
Rule gauss_legendre(int n);
// Gauss-Legendre mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);
// Gauss-Hermite for the weight exp(-x^2).
Rule gauss_hermite(int n);

// Integral over the ordered simplex beta > tau_1 > ... > tau_j > 0 of f(gaps), where
// gaps = (beta - tau_1, tau_1 - tau_2, ..., tau_j). Stick-breaking with v = sin^2(theta)
// which turns inverse square-root endpoint behaviour in the gaps into a smooth integrand.
double integrate_simplex(int j, double beta, int points_per_dim,
                         const std::function<double(const std::vector<double>& gaps)>& f);

std::complex<double> integrate_simplex_complex(
    int j, double beta, int points_per_dim,
    const std::function<std::complex<double>(const std::vector<double>& gaps)>& f);

}  // namespace diamag::quad
