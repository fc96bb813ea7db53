#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "diamag/errors.hpp"
#include "diamag/oracle.hpp"

namespace diamag::oracle {

namespace {

using cd = std::complex<double>;

// Orbits of the grid under the quarter turn (x, y) -> (-y, x), which leaves the
// symmetric-gauge Peierls Hamiltonian invariant.
struct Orbits {
  std::vector<std::array<int, 4>> points;  // R^s p_o; size-1 orbit (centre) repeats the point
  std::vector<int> size;
  std::vector<int> orbit_of, slot_of;
};

Orbits grid_orbits(int n) {
  Orbits o;
  o.orbit_of.assign(n * n, -1);
  o.slot_of.assign(n * n, 0);
  auto rot = [n](int r) {
    const int i = r % n, j = r / n;
    return (n - 1 - j) + n * i;
  };
  for (int r = 0; r < n * n; ++r) {
    if (o.orbit_of[r] >= 0) continue;
    std::array<int, 4> pts{r, rot(r), rot(rot(r)), rot(rot(rot(r)))};
    const int id = static_cast<int>(o.points.size());
    const int sz = pts[1] == r ? 1 : 4;
    for (int s = 0; s < sz; ++s) {
      o.orbit_of[pts[s]] = id;
      o.slot_of[pts[s]] = s;
    }
    o.points.push_back(pts);
    o.size.push_back(sz);
  }
  return o;
}

// Component of the symmetry-adapted basis vector b_{o,q} at slot s.
cd basis_coeff(int orbit_size, int q, int s) {
  if (orbit_size == 1) return 1.0;
  static const cd ipow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  return 0.5 * ipow[(q * s) % 4];
}

}  // namespace

void eigh(const Eigen::MatrixXcd& a, bool vectors, Eigen::VectorXd& values, Eigen::MatrixXcd& vecs) {
  const int n = static_cast<int>(a.rows());
  require(a.cols() == n, "eigh needs a square matrix");
  values.resize(n);
  if (n == 0) {
    vecs.resize(0, 0);
    return;
  }
  Eigen::MatrixXcd work = a;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', n,
                                         work.data(), n, values.data());
  if (info != 0)
    throw NumericalError("zheevd failed with info = " + std::to_string(info));
  if (vectors)
    vecs = std::move(work);
  else
    vecs.resize(0, 0);
}

SpectralData spectrum(const DiscreteHamiltonian& h, const SpectrumOptions& opt) {
  const int n = h.box.transverse_grid;
  const int dim = h.dimension;
  SpectralData s;
  s.box = h.box;
  s.omega = h.omega;
  s.spacing = h.spacing;
  s.longitudinal.resize(h.box.longitudinal_modes);
  for (int j = 1; j <= h.box.longitudinal_modes; ++j) {
    const double k = std::numbers::pi * j / h.box.side;
    s.longitudinal(j - 1) = 0.5 * k * k;
  }

  if (!opt.use_symmetry) {
    Eigen::VectorXd w;
    Eigen::MatrixXcd v;
    eigh(Eigen::MatrixXcd(h.entries), opt.vectors, w, v);
    s.eigenvalues = std::move(w);
    s.eigenvectors = std::move(v);
  } else {
    const Orbits orb = grid_orbits(n);
    const int norb = static_cast<int>(orb.points.size());
    struct Entry {
      double e;
      int q, k;
    };
    std::vector<Entry> all;
    all.reserve(dim);
    std::vector<Eigen::VectorXd> vals(4);
    std::vector<Eigen::MatrixXcd> vecs(4);
    std::vector<std::vector<int>> members(4);
    for (int q = 0; q < 4; ++q) {
      std::vector<int> local(norb, -1);
      for (int o = 0; o < norb; ++o)
        if (orb.size[o] == 4 || q == 0) {
          local[o] = static_cast<int>(members[q].size());
          members[q].push_back(o);
        }
      const int m = static_cast<int>(members[q].size());
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(m, m);
      for (int col = 0; col < m; ++col) {
        const int o2 = members[q][col];
        for (int s2 = 0; s2 < orb.size[o2]; ++s2) {
          const int p2 = orb.points[o2][s2];
          const cd b2 = basis_coeff(orb.size[o2], q, s2);
          for (Eigen::SparseMatrix<cd>::InnerIterator it(h.entries, p2); it; ++it) {
            const int p = static_cast<int>(it.row());
            const int o = orb.orbit_of[p];
            if (local[o] < 0) continue;
            block(local[o], col) +=
                std::conj(basis_coeff(orb.size[o], q, orb.slot_of[p])) * it.value() * b2;
          }
        }
      }
      eigh(block, opt.vectors, vals[q], vecs[q]);
      for (int k = 0; k < m; ++k) all.push_back({vals[q](k), q, k});
    }
    std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
      if (a.e != b.e) return a.e < b.e;
      return a.q != b.q ? a.q < b.q : a.k < b.k;
    });
    s.eigenvalues.resize(dim);
    for (int a = 0; a < dim; ++a) s.eigenvalues(a) = all[a].e;
    if (opt.vectors) {
      s.eigenvectors = Eigen::MatrixXcd::Zero(dim, dim);
      for (int a = 0; a < dim; ++a) {
        const auto& en = all[a];
        const auto& mem = members[en.q];
        for (std::size_t l = 0; l < mem.size(); ++l) {
          const cd c = vecs[en.q](static_cast<int>(l), en.k);
          const int o = mem[l];
          for (int s2 = 0; s2 < orb.size[o]; ++s2)
            s.eigenvectors(orb.points[o][s2], a) = c * basis_coeff(orb.size[o], en.q, s2);
        }
      }
    }
  }

  if (s.eigenvalues(0) < -1e-10 * std::abs(s.eigenvalues(dim - 1)))
    throw NumericalError("negative eigenvalue in a positive Hamiltonian");
  if (opt.vectors && orthonormality_probe(s) > 1e-8)
    throw NumericalError("eigenvectors fail the orthonormality check");
  return s;
}

double orthonormality_residual(const SpectralData& s) {
  require(s.has_vectors(), "spectral data has no eigenvectors");
  const Eigen::MatrixXcd g = s.eigenvectors.adjoint() * s.eigenvectors;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double orthonormality_probe(const SpectralData& s, int probes) {
  require(s.has_vectors(), "spectral data has no eigenvectors");
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> nd;
  const auto n = s.eigenvectors.cols();
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = cd(nd(rng), nd(rng));
    x.normalize();
    const Eigen::VectorXcd y = s.eigenvectors.adjoint() * (s.eigenvectors * x);
    worst = std::max(worst, (y - x).norm());
  }
  return worst;
}

}  // namespace diamag::oracle
