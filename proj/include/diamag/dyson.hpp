#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "diamag/magcore.hpp"
#include "diamag/mehler.hpp"

namespace diamag {

struct Composition {
  std::vector<int> parts;
  int order_sum = 0;

  int length() const { return static_cast<int>(parts.size()); }
  friend bool operator==(const Composition&, const Composition&) = default;
};

struct SimplexSample {
  std::vector<double> times;  // tau_1 > tau_2 > ... > tau_j
  double weight = 0.0;
};

enum class QuadratureMode { deterministic, monte_carlo };

struct QuadratureSpec {
  QuadratureMode mode = QuadratureMode::monte_carlo;
  std::int64_t sample_count = 100000;
  std::uint64_t seed = 1;
  int worker_count = 1;
  // Spatial proposal: Gaussian bridge whose link variances are the kernel's own scaled by this factor.
  double proposal_dilation = 1.0;
  bool antithetic = false;
  // Redistribute the total budget over compositions from a pilot variance estimate.
  bool pilot_allocation = false;
  int deterministic_points = 24;
};

struct ExpansionResult {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t terms_evaluated = 0;
  double imag = 0.0;
  double imag_std_error = 0.0;
};

namespace dyson {

inline constexpr int kCompositionCap = 12;
inline constexpr int kAssembleCap = 4;
inline constexpr std::int64_t kMinMonteCarloSamples = 100;

std::vector<Composition> enumerate_compositions(int n, int cap = kCompositionCap);

SimplexSample sample_simplex(int j, double beta, std::mt19937_64& rng);

double fk_closed_form(int k, double beta);

// prod of (gap)^{-1/2} over the k+1 gaps of the sample
double fk_integrand(const SimplexSample& s, double beta);

ExpansionResult fk_monte_carlo(int k, double beta, std::int64_t samples, std::uint64_t seed);
double fk_deterministic(int k, double beta, int points_per_dim);

std::complex<double> chain_integrand(const Composition& c, int m, const Point3& x,
                                     const std::vector<Point3>& nodes, const SimplexSample& s,
                                     const KernelParams& p);

// Exact spatial integral of the chain integrand over all nodes, for fixed time gaps
// (beta - tau_1, ..., tau_j).
std::complex<double> chain_spatial_integral(const Composition& c, int m,
                                            const std::vector<double>& gaps, double omega);

ExpansionResult w_term_infty(const Composition& c, int m, const KernelParams& p,
                             const QuadratureSpec& q, const Point3& x = {});

ExpansionResult assemble_derivative(int n, const KernelParams& p, const QuadratureSpec& q,
                                    const Point3& x = {}, int cap = kAssembleCap);

}  // namespace dyson
}  // namespace diamag
