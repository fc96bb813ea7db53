#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <vector>

#include "diamag/magcore.hpp"
#include "diamag/mehler.hpp"
#include "diamag/series.hpp"

namespace diamag {

struct BoxSpec {
  double side = 8.0;
  int transverse_grid = 32;
  int longitudinal_modes = 64;

  double spacing() const { return side / (transverse_grid + 1); }
};

struct DiscreteHamiltonian {
  BoxSpec box;
  double omega = 0.0;
  double spacing = 0.0;
  int dimension = 0;
  Eigen::SparseMatrix<std::complex<double>> entries;
};

struct SpectralData {
  BoxSpec box;
  double omega = 0.0;
  double spacing = 0.0;
  Eigen::VectorXd eigenvalues;     // transverse, ascending
  Eigen::MatrixXcd eigenvectors;   // columns, unit l2 norm on the grid; empty if not requested
  Eigen::VectorXd longitudinal;    // (pi j / L)^2 / 2, j = 1..M

  bool has_vectors() const { return eigenvectors.size() > 0; }
};

struct SpectrumOptions {
  bool vectors = true;
  bool use_symmetry = true;
};

struct FdResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double coarse = 0.0;  // plain central difference at the coarse step
  double fine = 0.0;    // plain central difference at half the step
};

struct GinibreGruberReport {
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;
};

struct DuhamelResult {
  std::complex<double> lhs;  // G_L - G_inf evaluated directly
  std::complex<double> rhs;  // boundary surface integral
  double residual = 0.0;     // |lhs - rhs| / |lhs|
};

class SpectralCache;

namespace oracle {

inline constexpr int kMaxGrid = 96;

void validate(const BoxSpec& b, int grid_cap = kMaxGrid);

// Number of longitudinal modes making the neglected Boltzmann weights below ~1e-18 at beta_min.
int longitudinal_modes_for(double side, double beta_min);

double grid_coordinate(const BoxSpec& b, int i);

// Omega may be negative here (conjugate gauge); public observables take omega >= 0.
DiscreteHamiltonian build_hamiltonian(const BoxSpec& b, double omega, int grid_cap = kMaxGrid);

double hermiticity_residual(const DiscreteHamiltonian& h);
double phase_unimodularity_residual(const DiscreteHamiltonian& h);

// Dense Hermitian eigensolver (LAPACK zheevd); eigenvalues ascending.
void eigh(const Eigen::MatrixXcd& a, bool vectors, Eigen::VectorXd& values, Eigen::MatrixXcd& vecs);

SpectralData spectrum(const DiscreteHamiltonian& h, const SpectrumOptions& opt = {});

// max |V^H V - I| over all entries; O(n^3).
double orthonormality_residual(const SpectralData& s);
// Randomized probe estimate of the same residual; O(n^2).
double orthonormality_probe(const SpectralData& s, int probes = 3);

// sum_j exp(-beta eps_j) (2/L) sin^2(...) and a bound on the omitted modes
SeriesResult longitudinal_diag(const SpectralData& s, double x3, double beta);

// Transverse heat diagonal sum_a exp(-beta E_a) |psi_a|^2 at every grid node (continuum normalization).
Eigen::VectorXd transverse_diag_grid(const SpectralData& s, double beta);

SeriesResult heat_diag_L(const SpectralData& s, const Point3& x, const KernelParams& p);

// G_L(x, y) for grid-node transverse positions (i1, j1), (i2, j2).
std::complex<double> heat_kernel_L_nodes(const SpectralData& s, int i1, int j1, double x3, int i2,
                                         int j2, double y3, double beta);

SeriesResult trace_semigroup_L(const SpectralData& s, const KernelParams& p);

SeriesResult pressure_L(const SpectralData& s, double beta, double z, int eps);
// Same quantity from the k-series in traces of the semigroup.
SeriesResult pressure_L_series(const SpectralData& s, double beta, double z, int eps);

// 1D Dirichlet heat kernel on (-L/2, L/2) by images, and its derivative in the first argument.
double dirichlet_kernel_1d(double side, double a, double b, double t);
double dirichlet_kernel_1d_da(double side, double a, double b, double t);

// Caches eigenvalue-only spectra of one box at distinct omegas; thread-safe.
class SpectrumMemo {
 public:
  explicit SpectrumMemo(BoxSpec box, SpectralCache* disk = nullptr);
  std::shared_ptr<const SpectralData> at(double omega);
  void prefetch(const std::vector<double>& omegas, int workers);
  const BoxSpec& box() const { return box_; }
  int solves() const { return solves_; }

 private:
  BoxSpec box_;
  SpectralCache* disk_;
  std::mutex mu_;
  std::map<double, std::shared_ptr<const SpectralData>> memo_;
  int solves_ = 0;
};

struct FdOptions {
  double step = 0.02;
  bool richardson = true;
  int workers = 1;
  SpectralCache* cache = nullptr;
};

// Central-difference stencil offsets (in units of the step) and weights for the n-th derivative.
std::vector<std::pair<int, double>> central_stencil(int n);

FdResult chi_L_fd(SpectrumMemo& memo, int n, double beta, double z, int eps, double omega,
                  const FdOptions& opt = {});
FdResult chi_L_fd(const BoxSpec& b, int n, double beta, double z, int eps, double omega,
                  const FdOptions& opt = {});

struct DuhamelOptions {
  int time_points = 48;
  int longitudinal_points = 64;
};

// x and x' are snapped to the nearest transverse grid node; x3 coordinates are continuous.
DuhamelResult duhamel(const SpectralData& s, const Point3& x, const Point3& xp,
                      const KernelParams& p, const DuhamelOptions& opt = {});
double duhamel_residual(const BoxSpec& b, const Point3& x, const Point3& xp, const KernelParams& p);

double ginibre_gruber_ratio(const Eigen::MatrixXcd& h, const std::vector<Eigen::MatrixXcd>& a,
                            const std::vector<double>& t);
GinibreGruberReport ginibre_gruber_check(int trials, int dim, std::mt19937_64& rng);

}  // namespace oracle

// Content-addressed on-disk store of SpectralData keyed by (L, N, M, omega, stencil hash).
class SpectralCache {
 public:
  explicit SpectralCache(std::filesystem::path dir, std::uint64_t stencil_hash = 0);

  std::filesystem::path path_for(const BoxSpec& b, double omega, bool vectors) const;
  std::optional<SpectralData> load(const BoxSpec& b, double omega, bool vectors) const;
  void store(const SpectralData& s) const;

  static void write(const std::filesystem::path& file, const SpectralData& s, std::uint64_t stencil_hash);
  static SpectralData read(const std::filesystem::path& file);

 private:
  std::filesystem::path dir_;
  std::uint64_t stencil_hash_;
};

}  // namespace diamag
