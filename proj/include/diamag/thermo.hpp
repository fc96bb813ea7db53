#pragma once

#include "diamag/series.hpp"

namespace diamag {

struct GasParams {
  double beta = 1.0;
  double omega = 0.0;
  double z = 0.0;
  int eps = 1;  // +1 Fermi, -1 Bose
};

namespace thermo {

inline constexpr int kMaxTerms = 1000000;

void validate(const GasParams& g);

// Certified bound on |sum_{k>K} term_k| for the n-th omega-derivative of the pressure series.
double tail_bound(int n, const GasParams& g, int K);

SeriesResult pressure_infty(const GasParams& g);

SeriesResult chi_infty(int n, const GasParams& g);

}  // namespace thermo
}  // namespace diamag
