#include <Eigen/SVD>
#include <cmath>

#include "diamag/errors.hpp"
#include "diamag/oracle.hpp"

namespace diamag::oracle {

namespace {

using Mat = Eigen::MatrixXcd;

Mat semigroup(const Eigen::VectorXd& ev, const Mat& vecs, double t) {
  Eigen::VectorXcd d(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) d(i) = std::exp(-t * ev(i));
  return vecs * d.asDiagonal() * vecs.adjoint();
}

Mat random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = {nd(rng), nd(rng)};
  return a;
}

}  // namespace

double ginibre_gruber_ratio(const Mat& h, const std::vector<Mat>& a, const std::vector<double>& t) {
  require(!a.empty() && a.size() == t.size(), "need one time per bounded operator");
  require((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + h.cwiseAbs().maxCoeff()),
          "generator must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolve failed");
  Mat prod = Mat::Identity(h.rows(), h.cols());
  double norms = 1.0, tsum = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    require(t[l] > 0.0, "times must be positive");
    prod = prod * a[l] * semigroup(es.eigenvalues(), es.eigenvectors(), t[l]);
    norms *= Eigen::JacobiSVD<Mat>(a[l]).singularValues()(0);
    tsum += t[l];
  }
  const double lhs = Eigen::JacobiSVD<Mat>(prod).singularValues().sum();
  double tr = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) tr += std::exp(-tsum * es.eigenvalues()(i));
  return lhs / (norms * tr);
}

GinibreGruberReport ginibre_gruber_check(int trials, int dim, std::mt19937_64& rng) {
  require(trials >= 1, "need at least one trial");
  require(dim >= 1 && dim <= 64, "dimension must be in 1..64");
  std::uniform_int_distribution<int> kd(0, 4);
  std::uniform_real_distribution<double> td(0.05, 2.0);
  GinibreGruberReport rep;
  rep.trials = trials;
  for (int tr = 0; tr < trials; ++tr) {
    const Mat b = random_matrix(dim, rng);
    const Mat h = b * b.adjoint() / dim;
    const int k = kd(rng);
    std::vector<Mat> a;
    std::vector<double> t;
    for (int l = 0; l <= k; ++l) {
      a.push_back(random_matrix(dim, rng));
      t.push_back(td(rng));
    }
    const double r = ginibre_gruber_ratio(h, a, t);
    rep.max_ratio = std::max(rep.max_ratio, r);
    if (r > 1.0 + 1e-10) ++rep.violations;
  }
  return rep;
}

}  // namespace diamag::oracle
