#include <cmath>
#include <numbers>

#include "diamag/errors.hpp"
#include "diamag/oracle.hpp"

namespace diamag::oracle {

void validate(const BoxSpec& b, int grid_cap) {
  require(std::isfinite(b.side) && b.side > 1.0, "box side must exceed 1");
  require(b.transverse_grid >= 8, "transverse grid must have at least 8 points");
  require(b.longitudinal_modes >= 1, "need at least one longitudinal mode");
  if (b.transverse_grid > grid_cap)
    throw ResourceError("transverse grid " + std::to_string(b.transverse_grid) +
                        " exceeds cap " + std::to_string(grid_cap));
}

int longitudinal_modes_for(double side, double beta_min) {
  require(side > 0.0 && beta_min > 0.0, "side and beta must be positive");
  // exp(-beta (pi M / L)^2 / 2) <= 1e-18
  const double m = side / std::numbers::pi * std::sqrt(2.0 * 41.5 / beta_min);
  return static_cast<int>(std::ceil(m)) + 1;
}

double grid_coordinate(const BoxSpec& b, int i) { return -0.5 * b.side + (i + 1) * b.spacing(); }

DiscreteHamiltonian build_hamiltonian(const BoxSpec& b, double omega, int grid_cap) {
  validate(b, grid_cap);
  require(std::isfinite(omega), "omega must be finite");
  const int n = b.transverse_grid;
  const double h = b.spacing();
  const double hop = -0.5 / (h * h);
  using cd = std::complex<double>;
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(static_cast<std::size_t>(5) * n * n);
  auto idx = [n](int i, int j) { return i + n * j; };
  for (int j = 0; j < n; ++j) {
    const double y = grid_coordinate(b, j);
    for (int i = 0; i < n; ++i) {
      const double x = grid_coordinate(b, i);
      const int r = idx(i, j);
      trip.emplace_back(r, r, cd(2.0 / (h * h), 0.0));
      // link phase theta = a(midpoint) . (r' - r); entry H[r, r'] = hop * exp(-i omega theta)
      if (i + 1 < n) {
        const double theta = -0.5 * y * h;
        const cd v = hop * std::polar(1.0, -omega * theta);
        trip.emplace_back(r, idx(i + 1, j), v);
        trip.emplace_back(idx(i + 1, j), r, std::conj(v));
      }
      if (j + 1 < n) {
        const double theta = 0.5 * x * h;
        const cd v = hop * std::polar(1.0, -omega * theta);
        trip.emplace_back(r, idx(i, j + 1), v);
        trip.emplace_back(idx(i, j + 1), r, std::conj(v));
      }
    }
  }
  DiscreteHamiltonian out;
  out.box = b;
  out.omega = omega;
  out.spacing = h;
  out.dimension = n * n;
  out.entries.resize(n * n, n * n);
  out.entries.setFromTriplets(trip.begin(), trip.end());
  out.entries.makeCompressed();
  if (hermiticity_residual(out) > 1e-12 * (1.0 / (h * h)))
    throw NumericalError("assembled Hamiltonian is not Hermitian");
  return out;
}

double hermiticity_residual(const DiscreteHamiltonian& h) {
  const Eigen::SparseMatrix<std::complex<double>> d = h.entries - Eigen::SparseMatrix<std::complex<double>>(h.entries.adjoint());
  double r = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(d, k); it; ++it)
      r = std::max(r, std::abs(it.value()));
  return r;
}

double phase_unimodularity_residual(const DiscreteHamiltonian& h) {
  const double hop = 0.5 / (h.spacing * h.spacing);
  double r = 0.0;
  for (int k = 0; k < h.entries.outerSize(); ++k)
    for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(h.entries, k); it; ++it)
      if (it.row() != it.col()) r = std::max(r, std::abs(std::abs(it.value()) / hop - 1.0));
  return r;
}

}  // namespace diamag::oracle
