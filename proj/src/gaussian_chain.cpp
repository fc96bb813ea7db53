// Closed-form spatial integral of a chain of Mehler factors.
//
// With delta_l = y_l - x the transverse Gaussians form a bridge with link variances
// t_l / c_l; the flux is a quadratic form in delta and the regularizing weights are
// |d_l|^2 quadratic forms, so the integral reduces to complex Gaussian moments.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "diamag/dyson.hpp"
#include "diamag/errors.hpp"

namespace diamag::dyson {

namespace {

using cd = std::complex<double>;
using MatC = Eigen::MatrixXcd;

// Joint cumulant of quadratic forms z^T A z under N(0, S): 2^{s-1} sum over cyclic orders.
cd joint_cumulant(const std::vector<MatC>& sa, const std::vector<int>& block) {
  const int s = static_cast<int>(block.size());
  if (s == 1) return sa[block[0]].trace();
  std::vector<int> rest(block.begin() + 1, block.end());
  std::sort(rest.begin(), rest.end());
  cd sum = 0.0;
  do {
    MatC prod = sa[block[0]];
    for (int r : rest) prod = prod * sa[r];
    sum += prod.trace();
  } while (std::next_permutation(rest.begin(), rest.end()));
  return std::ldexp(1.0, s - 1) * sum;
}

// E[prod_i z^T A_i z] as a sum over set partitions of products of joint cumulants.
cd gaussian_moment(const std::vector<MatC>& sa) {
  const int r = static_cast<int>(sa.size());
  if (r == 0) return 1.0;
  std::vector<std::vector<int>> blocks;
  std::function<cd(int)> rec = [&](int i) -> cd {
    if (i == r) {
      cd prod = 1.0;
      for (const auto& b : blocks) prod *= joint_cumulant(sa, b);
      return prod;
    }
    cd total = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      blocks[b].push_back(i);
      total += rec(i + 1);
      blocks[b].pop_back();
    }
    blocks.push_back({i});
    total += rec(i + 1);
    blocks.pop_back();
    return total;
  };
  return rec(0);
}

}  // namespace

cd chain_spatial_integral(const Composition& c, int m, const std::vector<double>& gaps,
                          double omega) {
  const int j = c.length();
  require(j >= 1, "empty composition");
  require(static_cast<int>(gaps.size()) == j + 1, "gap count must equal chain length + 1");
  require(m >= 0, "flux power must be non-negative");
  if (j == 1 && m > 0) return 0.0;

  double beta = 0.0, sech_prod = 1.0, vtot = 0.0;
  std::vector<double> v(j + 1);
  for (int l = 0; l <= j; ++l) {
    const double u = 0.5 * omega * gaps[l];
    const double ct = mehler::u_over_tanh(u);
    sech_prod *= mehler::u_over_sinh(u) / ct;
    v[l] = gaps[l] / ct;
    beta += gaps[l];
    vtot += v[l];
  }

  std::vector<double> s(j + 1, 0.0);
  for (int a = 1; a <= j; ++a) s[a] = s[a - 1] + v[a - 1];
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * j, 2 * j);
  for (int a = 1; a <= j; ++a)
    for (int b = a; b <= j; ++b) {
      const double cab = s[a] * (vtot - s[b]) / vtot;
      cov(a - 1, b - 1) = cov(b - 1, a - 1) = cab;
      cov(j + a - 1, j + b - 1) = cov(j + b - 1, j + a - 1) = cab;
    }

  // Fl = z^T F z, z = (dx_1..dx_j, dy_1..dy_j)
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2 * j, 2 * j);
  for (int k = 0; k + 1 < j; ++k) {
    F(k, j + k + 1) = F(j + k + 1, k) = -0.25;
    F(j + k, k + 1) = F(k + 1, j + k) = 0.25;
  }

  cd det_factor = 1.0;
  MatC sigma = cov.cast<cd>();
  if (omega != 0.0 && j >= 2) {
    const Eigen::MatrixXd sf = cov * F;
    Eigen::EigenSolver<Eigen::MatrixXd> es(sf, false);
    if (es.info() != Eigen::Success) throw NumericalError("flux form eigensolve failed");
    for (int i = 0; i < 2 * j; ++i)
      det_factor /= std::sqrt(cd(1.0, -2.0 * omega * es.eigenvalues()(i).real()));
    const MatC A = MatC::Identity(2 * j, 2 * j) - cd(0.0, 2.0 * omega) * (F.cast<cd>() * sigma);
    sigma = sigma * A.inverse();
  }

  std::vector<MatC> forms;
  double alpha = 1.0;
  for (int l = 1; l <= j; ++l) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(j);
    e(l - 1) = 1.0;
    if (l < j) e(l) = -1.0;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * j, 2 * j);
    Q.topLeftCorner(j, j) = e * e.transpose();
    Q.bottomRightCorner(j, j) = e * e.transpose();
    forms.push_back(sigma * Q.cast<cd>());
    alpha *= c.parts[l - 1] == 1 ? 0.25 * omega : 0.125;
  }
  const MatC sF = sigma * F.cast<cd>();
  for (int i = 0; i < m; ++i) forms.push_back(sF);

  cd flux_factor = std::pow(cd(0.0, 1.0), m) / std::tgamma(m + 1.0);
  const double norm = 1.0 / (2.0 * std::numbers::pi * vtot) /
                      std::sqrt(2.0 * std::numbers::pi * beta);
  return sech_prod * norm * alpha * flux_factor * det_factor * gaussian_moment(forms);
}

}  // namespace diamag::dyson
