#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "diamag/errors.hpp"
#include "diamag/oracle.hpp"

using namespace diamag;

namespace {

SpectralData solve(const BoxSpec& b, double w, bool vectors = true, bool sym = true) {
  return oracle::spectrum(oracle::build_hamiltonian(b, w), {.vectors = vectors, .use_symmetry = sym});
}

}  // namespace

TEST_CASE("hamiltonian structure") {
  const auto h = oracle::build_hamiltonian({3.0, 8, 20}, 1.7);
  CHECK(h.dimension == 64);
  CHECK(oracle::hermiticity_residual(h) < 1e-15);
  CHECK(oracle::phase_unimodularity_residual(h) < 1e-15);
  CHECK_THROWS_AS(oracle::build_hamiltonian({3.0, 97, 20}, 1.0), ResourceError);
  CHECK_THROWS_AS(oracle::build_hamiltonian({-3.0, 8, 20}, 1.0), ValidationError);
}

TEST_CASE("lattice spectrum against an independent dense build") {
  // numpy dense Peierls build, L = 3, N = 8
  const double w0[] = {1.08553283, 2.64836642, 2.64836642, 4.21120002};
  const double w1[] = {1.15260018, 2.2894398, 3.19384037, 3.76516346};
  const double w25[] = {1.47852226, 2.10924179, 3.09121287, 4.09229501};
  const BoxSpec b{3.0, 8, 20};
  const auto s0 = solve(b, 0.0), s1 = solve(b, 1.0), s25 = solve(b, 2.5);
  for (int i = 0; i < 4; ++i) {
    CHECK(s0.eigenvalues(i) == doctest::Approx(w0[i]).epsilon(1e-8));
    CHECK(s1.eigenvalues(i) == doctest::Approx(w1[i]).epsilon(1e-8));
    CHECK(s25.eigenvalues(i) == doctest::Approx(w25[i]).epsilon(1e-8));
  }
  // free lattice: sum of two 1D Dirichlet spectra
  const double h = b.spacing();
  CHECK(s0.eigenvalues(0) == doctest::Approx(2 * (1 - std::cos(std::numbers::pi / 9)) / (h * h)));
}

TEST_CASE("symmetry-blocked and plain solves agree") {
  const BoxSpec b{4.0, 13, 20};
  const auto a = solve(b, 1.3, true, true), c = solve(b, 1.3, true, false);
  CHECK((a.eigenvalues - c.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(oracle::orthonormality_residual(a) < 1e-10);
  CHECK(oracle::orthonormality_probe(a) < 1e-8);
  // conjugate gauge
  const auto m = oracle::spectrum(oracle::build_hamiltonian(b, -1.3), {.vectors = false});
  CHECK((a.eigenvalues - m.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
  // completeness
  const Eigen::MatrixXcd P = a.eigenvectors * a.eigenvectors.adjoint();
  CHECK((P - Eigen::MatrixXcd::Identity(P.rows(), P.cols())).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("free Dirichlet spectrum in the continuum limit") {
  const BoxSpec b{8.0, 64, 40};
  const auto s = solve(b, 0.0, false);
  const double e11 = std::numbers::pi * std::numbers::pi / (8.0 * 8.0);
  CHECK(s.eigenvalues(0) == doctest::Approx(e11).epsilon(1e-2));
  CHECK(s.eigenvalues(1) == doctest::Approx(2.5 * e11).epsilon(1e-2));
}

TEST_CASE("heat diagonal and trace") {
  const BoxSpec b{4.0, 15, 30};
  const auto s = solve(b, 1.0);
  const KernelParams p{1.0, 1.0};
  const auto tr = oracle::trace_semigroup_L(s, p);
  CHECK(tr.value <= std::pow(4.0, 3) / std::pow(2 * std::numbers::pi, 1.5));

  // grid quadrature of the diagonal reproduces the trace
  const Eigen::VectorXd td = oracle::transverse_diag_grid(s, p.beta);
  const double h = s.spacing;
  double tt = 0;
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) tt += std::exp(-p.beta * s.eigenvalues(k));
  CHECK(td.sum() * h * h == doctest::Approx(tt).epsilon(1e-10));

  // value vanishes towards a face
  const double c = oracle::grid_coordinate(b, 7);
  double prev = 1e300;
  for (int i = 7; i < 15; ++i) {
    const double v = oracle::heat_diag_L(s, {oracle::grid_coordinate(b, i), c, 0.0}, p).value;
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(oracle::heat_diag_L(s, {2.0, c, 0.0}, p), ValidationError);

  // ground-state domination at large beta
  const KernelParams cold{20.0, 1.0};
  const double E = s.eigenvalues(0) + s.longitudinal(0);
  const auto big = oracle::trace_semigroup_L(s, cold).value;
  CHECK(big == doctest::Approx(std::exp(-cold.beta * E)).epsilon(1e-6));
}

TEST_CASE("centre diagonal is close to the Mehler diagonal") {
  const BoxSpec b{10.0, 63, 60};
  const auto s = solve(b, 1.0);
  const double v = oracle::heat_diag_L(s, {0.0, 0.0, 0.0}, {1.0, 1.0}).value;
  CHECK(v == doctest::Approx(mehler::mehler_diag({1.0, 1.0})).epsilon(0.05));
}

TEST_CASE("finite-box pressure") {
  const BoxSpec b{3.0, 8, 20};
  for (double w : {0.0, 1.0, 2.5}) {
    const auto s = solve(b, w, false);
    const double ref_f = w == 0.0 ? 0.006401706336929518 : w == 1.0 ? 0.006229185479507369 : 0.005424512030230138;
    const double ref_b = w == 0.0 ? 0.006802447128816672 : w == 1.0 ? 0.006590730217110448 : 0.005646707191278644;
    CHECK(oracle::pressure_L(s, 1.0, 0.5, 1).value == doctest::Approx(ref_f).epsilon(1e-12));
    CHECK(oracle::pressure_L(s, 1.0, 0.5, -1).value == doctest::Approx(ref_b).epsilon(1e-12));
    CHECK(oracle::pressure_L_series(s, 1.0, 0.5, 1).value ==
          doctest::Approx(oracle::pressure_L(s, 1.0, 0.5, 1).value).epsilon(1e-10));
    CHECK(oracle::pressure_L(s, 1.0, 0.0, 1).value == 0.0);
  }
  const auto s = solve(b, 1.0, false);
  double prev = -1;
  for (double z = 0.05; z < 0.9; z += 0.1) {
    const double p = oracle::pressure_L(s, 1.0, z, 1).value;
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("finite-difference susceptibilities") {
  oracle::SpectrumMemo memo({4.0, 15, 20});
  const auto odd = oracle::chi_L_fd(memo, 1, 1.0, 0.5, 1, 0.0);
  CHECK(std::abs(odd.value) <= odd.error_estimate + 1e-15);
  const auto c2 = oracle::chi_L_fd(memo, 2, 1.0, 0.5, 1, 1.0);
  CHECK(std::isfinite(c2.value));
  CHECK(std::abs(c2.fine - c2.coarse) <= 0.05 * std::abs(c2.value));
  const int solves = memo.solves();
  oracle::chi_L_fd(memo, 2, 1.0, 0.5, 1, 1.0);
  CHECK(memo.solves() == solves);
  CHECK_THROWS_AS(oracle::chi_L_fd(memo, 2, 1.0, 0.5, 1, 0.01), ValidationError);
}

TEST_CASE("Duhamel boundary representation") {
  const BoxSpec b{6.0, 32, 40};
  const auto s = solve(b, 1.0);
  const auto r = oracle::duhamel(s, {2.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {1.0, 1.0});
  CHECK(r.residual < 0.05);
  // deep in the bulk at small beta the boundary term is negligible
  const auto cold = oracle::duhamel(s, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.1, 1.0});
  CHECK(std::abs(cold.rhs) <= 1e-6 * mehler::mehler_diag({0.1, 1.0}));
  // moving towards a face increases the boundary correction
  double prev = 0;
  for (double x1 : {0.0, 1.0, 2.0, 2.5}) {
    const double d = std::abs(oracle::duhamel(s, {x1, 0, 0}, {x1, 0, 0}, {1.0, 1.0}).rhs);
    CHECK(d > prev);
    prev = d;
  }
  CHECK_THROWS_AS(oracle::duhamel(s, {2.9, 0, 0}, {0, 0, 0}, {1.0, 1.0}), ValidationError);
}

TEST_CASE("Ginibre-Gruber") {
  Eigen::MatrixXcd h(2, 2);
  h << 0.0, 0.0, 0.0, 1.0;
  Eigen::MatrixXcd a(2, 2);
  a << 2.0, 0.0, 0.0, 0.0;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  CHECK(oracle::ginibre_gruber_ratio(h, {id, a}, {1.0, 1.0}) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));
  CHECK(oracle::ginibre_gruber_ratio(h, {id, id, id}, {0.2, 0.3, 0.5}) == doctest::Approx(1.0));
  std::mt19937_64 g(2);
  const auto rep = oracle::ginibre_gruber_check(300, 5, g);
  CHECK(rep.violations == 0);
  CHECK(rep.max_ratio <= 1 + 1e-10);
}

TEST_CASE("spectral cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "diamag_cache_test";
  std::filesystem::remove_all(dir);
  SpectralCache cache(dir, 42);
  const BoxSpec b{3.0, 8, 20};
  const auto s = solve(b, 0.9);
  CHECK_FALSE(cache.load(b, 0.9, true).has_value());
  cache.store(s);
  const auto r = cache.load(b, 0.9, true);
  REQUIRE(r.has_value());
  CHECK((r->eigenvalues - s.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r->eigenvectors - s.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r->spacing == s.spacing);

  oracle::SpectrumMemo memo(b, &cache);
  memo.at(0.4);
  oracle::SpectrumMemo again(b, &cache);
  again.at(0.4);
  CHECK(again.solves() == 0);
  std::filesystem::remove_all(dir);
}
