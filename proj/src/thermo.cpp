#include "diamag/thermo.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "diamag/errors.hpp"
#include "diamag/mehler.hpp"

namespace diamag::thermo {

namespace {

// sup over real u of |d^n/du^n (u / sinh u)|: Cauchy estimate on the strip |Im u| <= pi/2,
// where |u / sinh u| <= pi/2.
double derivative_envelope(int n) {
  if (n == 0) return 1.0;
  return std::tgamma(n + 1.0) * std::pow(2.0 / std::numbers::pi, n - 1);
}

double term_bound(int n, const GasParams& g, double k) {
  const double a = std::pow(2.0 * std::numbers::pi * g.beta, -1.5) *
                   std::pow(0.5 * g.beta, n) * derivative_envelope(n) / g.beta;
  return a * std::pow(k, n - 2.5) * std::pow(std::abs(g.z), k);
}

// k-th term of the n-th derivative series: -(eps/beta) (-eps z)^k / k * d^n D(k beta, omega)
double series_term(int n, const GasParams& g, int k) {
  const KernelParams p{k * g.beta, g.omega};
  const double deriv = n == 0 ? mehler::mehler_diag(p)
                              : mehler::diag_jet(n, p).derivative(n);
  const double zk = std::pow(-g.eps * g.z, k);
  return -(g.eps / g.beta) * zk / k * deriv;
}

SeriesResult sum_series(int n, const GasParams& g) {
  validate(g);
  require(n >= 0 && n <= mehler::kJetOrderCap, "derivative order exceeds jet cap");
  SeriesResult r;
  r.terms = 1;
  if (g.z == 0.0) return r;
  double sum = 0.0;
  int k = 1;
  for (; k <= kMaxTerms; ++k) {
    sum += series_term(n, g, k);
    const double tb = tail_bound(n, g, k);
    if (tb <= std::max(1e-17 * std::abs(sum), 1e-300)) break;
  }
  k = std::min(k, kMaxTerms);
  r.value = sum;
  r.terms = k;
  r.tail_bound = tail_bound(n, g, k);
  if (!std::isfinite(r.value)) throw NumericalError("non-finite series value");
  return r;
}

}  // namespace

void validate(const GasParams& g) {
  require(std::isfinite(g.beta) && g.beta > 0.0, "beta must be positive");
  require(std::isfinite(g.omega) && g.omega >= 0.0, "omega must be non-negative");
  require(std::isfinite(g.z) && std::abs(g.z) < 1.0, "fugacity must satisfy |z| < 1");
  require(g.eps == 1 || g.eps == -1, "eps must be +1 (Fermi) or -1 (Bose)");
}

double tail_bound(int n, const GasParams& g, int K) {
  validate(g);
  require(K >= 1, "K must be at least 1");
  require(n >= 0, "derivative order must be non-negative");
  if (g.z == 0.0) return 0.0;
  const double ratio = std::abs(g.z) * std::max(1.0, std::pow((K + 2.0) / (K + 1.0), n - 2.5));
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return term_bound(n, g, K + 1.0) / (1.0 - ratio);
}

SeriesResult pressure_infty(const GasParams& g) { return sum_series(0, g); }

SeriesResult chi_infty(int n, const GasParams& g) {
  require(n >= 1, "susceptibility order must be at least 1");
  return sum_series(n, g);
}

}  // namespace diamag::thermo
