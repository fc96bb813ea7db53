#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <set>
#include <thread>

#include "diamag/errors.hpp"
#include "diamag/oracle.hpp"

namespace diamag::oracle {

namespace {

using cd = std::complex<double>;

double longitudinal_tail(const SpectralData& s, double beta) {
  const int m = static_cast<int>(s.longitudinal.size());
  const double a = 0.5 * beta * std::pow(std::numbers::pi / s.box.side, 2);
  const double first = std::exp(-a * (m + 1.0) * (m + 1.0));
  return first / (1.0 - std::exp(-a * (2.0 * m + 3.0)));
}

double boltzmann_sum(const Eigen::VectorXd& e, double beta) {
  double t = 0.0;
  for (Eigen::Index a = 0; a < e.size(); ++a) t += std::exp(-beta * e(a));
  return t;
}

void check_inside(const SpectralData& s, const Point3& x) {
  magcore::check_finite(x);
  const double h = 0.5 * s.box.side;
  require(std::abs(x.x1) < h && std::abs(x.x2) < h && std::abs(x.x3) < h,
          "point must lie strictly inside the box");
}

double node_diag(const SpectralData& s, const Eigen::VectorXd& w, int i, int j) {
  const int n = s.box.transverse_grid;
  if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
  const int r = i + n * j;
  double v = 0.0;
  for (Eigen::Index a = 0; a < w.size(); ++a) v += w(a) * std::norm(s.eigenvectors(r, a));
  return v / (s.spacing * s.spacing);
}

double gaussian(double x, double t) {
  return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

int image_count(double side, double t) {
  return static_cast<int>(std::ceil((std::sqrt(100.0 * t) + side) / (2.0 * side))) + 1;
}

}  // namespace

SeriesResult longitudinal_diag(const SpectralData& s, double x3, double beta) {
  const double L = s.box.side;
  SeriesResult r;
  for (Eigen::Index j = 0; j < s.longitudinal.size(); ++j) {
    const double sn = std::sin(std::numbers::pi * (j + 1) * (x3 + 0.5 * L) / L);
    r.value += std::exp(-beta * s.longitudinal(j)) * (2.0 / L) * sn * sn;
  }
  r.terms = static_cast<int>(s.longitudinal.size());
  r.tail_bound = (2.0 / L) * longitudinal_tail(s, beta);
  return r;
}

Eigen::VectorXd transverse_diag_grid(const SpectralData& s, double beta) {
  require(s.has_vectors(), "heat diagonal needs eigenvectors");
  Eigen::VectorXd w(s.eigenvalues.size());
  for (Eigen::Index a = 0; a < w.size(); ++a) w(a) = std::exp(-beta * s.eigenvalues(a));
  return (s.eigenvectors.cwiseAbs2() * w) / (s.spacing * s.spacing);
}

SeriesResult heat_diag_L(const SpectralData& s, const Point3& x, const KernelParams& p) {
  mehler::validate(p);
  require(s.has_vectors(), "heat diagonal needs eigenvectors");
  check_inside(s, x);
  Eigen::VectorXd w(s.eigenvalues.size());
  for (Eigen::Index a = 0; a < w.size(); ++a) w(a) = std::exp(-p.beta * s.eigenvalues(a));
  const double h = s.spacing, half = 0.5 * s.box.side;
  const double fx = (x.x1 + half) / h - 1.0, fy = (x.x2 + half) / h - 1.0;
  const int i0 = static_cast<int>(std::floor(fx)), j0 = static_cast<int>(std::floor(fy));
  const double tx = fx - i0, ty = fy - j0;
  auto nd = [&](int i, int j, double wt) { return wt == 0.0 ? 0.0 : wt * node_diag(s, w, i, j); };
  const double trans = nd(i0, j0, (1 - tx) * (1 - ty)) + nd(i0 + 1, j0, tx * (1 - ty)) +
                       nd(i0, j0 + 1, (1 - tx) * ty) + nd(i0 + 1, j0 + 1, tx * ty);
  const SeriesResult lon = longitudinal_diag(s, x.x3, p.beta);
  return {trans * lon.value, trans * lon.tail_bound, lon.terms};
}

cd heat_kernel_L_nodes(const SpectralData& s, int i1, int j1, double x3, int i2, int j2, double y3,
                       double beta) {
  require(s.has_vectors(), "heat kernel needs eigenvectors");
  const int n = s.box.transverse_grid;
  const int r1 = i1 + n * j1, r2 = i2 + n * j2;
  cd t = 0.0;
  for (Eigen::Index a = 0; a < s.eigenvalues.size(); ++a)
    t += std::exp(-beta * s.eigenvalues(a)) * s.eigenvectors(r1, a) * std::conj(s.eigenvectors(r2, a));
  t /= s.spacing * s.spacing;
  const double L = s.box.side;
  double g3 = 0.0;
  for (Eigen::Index j = 0; j < s.longitudinal.size(); ++j) {
    const double k = std::numbers::pi * (j + 1) / L;
    g3 += std::exp(-beta * s.longitudinal(j)) * (2.0 / L) * std::sin(k * (x3 + 0.5 * L)) *
          std::sin(k * (y3 + 0.5 * L));
  }
  return t * g3;
}

SeriesResult trace_semigroup_L(const SpectralData& s, const KernelParams& p) {
  mehler::validate(p);
  const double tperp = boltzmann_sum(s.eigenvalues, p.beta);
  const double tlong = boltzmann_sum(s.longitudinal, p.beta);
  return {tperp * tlong, tperp * longitudinal_tail(s, p.beta),
          static_cast<int>(s.longitudinal.size())};
}

SeriesResult pressure_L(const SpectralData& s, double beta, double z, int eps) {
  require(beta > 0.0, "beta must be positive");
  require(std::abs(z) < 1.0, "fugacity must satisfy |z| < 1");
  require(eps == 1 || eps == -1, "eps must be +1 or -1");
  const double L3 = std::pow(s.box.side, 3);
  SeriesResult r;
  r.terms = static_cast<int>(s.longitudinal.size());
  if (z == 0.0) return r;
  Eigen::VectorXd bl(s.longitudinal.size());
  for (Eigen::Index j = 0; j < bl.size(); ++j) bl(j) = std::exp(-beta * s.longitudinal(j));
  double sum = 0.0;
  for (Eigen::Index a = 0; a < s.eigenvalues.size(); ++a) {
    const double ba = eps * z * std::exp(-beta * s.eigenvalues(a));
    for (Eigen::Index j = 0; j < bl.size(); ++j) sum += std::log1p(ba * bl(j));
  }
  r.value = eps * sum / (beta * L3);
  r.tail_bound = std::abs(z) / (1.0 - std::abs(z)) * boltzmann_sum(s.eigenvalues, beta) *
                 longitudinal_tail(s, beta) / (beta * L3);
  if (!std::isfinite(r.value)) throw NumericalError("non-finite finite-volume pressure");
  return r;
}

SeriesResult pressure_L_series(const SpectralData& s, double beta, double z, int eps) {
  require(beta > 0.0, "beta must be positive");
  require(std::abs(z) < 1.0, "fugacity must satisfy |z| < 1");
  require(eps == 1 || eps == -1, "eps must be +1 or -1");
  const double L3 = std::pow(s.box.side, 3);
  SeriesResult r;
  r.terms = 1;
  if (z == 0.0) return r;
  const double tr1 = boltzmann_sum(s.eigenvalues, beta) * boltzmann_sum(s.longitudinal, beta);
  const double az = std::abs(z);
  double sum = 0.0;
  int k = 1;
  for (;; ++k) {
    const double tr = boltzmann_sum(s.eigenvalues, k * beta) * boltzmann_sum(s.longitudinal, k * beta);
    sum += -std::pow(-eps * z, k) / k * tr;
    const double tail = std::pow(az, k + 1) * tr1 / ((k + 1) * (1.0 - az));
    if (tail <= 1e-17 * std::abs(sum) || k >= 100000) {
      r.tail_bound = tail / (beta * L3);
      break;
    }
  }
  r.value = eps * sum / (beta * L3);
  r.terms = k;
  r.tail_bound += pressure_L(s, beta, z, eps).tail_bound;
  return r;
}

double dirichlet_kernel_1d(double side, double a, double b, double t) {
  const double s1 = a + 0.5 * side, s2 = b + 0.5 * side;
  const int R = image_count(side, t);
  double v = 0.0;
  for (int m = -R; m <= R; ++m)
    v += gaussian(s1 - s2 + 2.0 * m * side, t) - gaussian(s1 + s2 + 2.0 * m * side, t);
  return v;
}

double dirichlet_kernel_1d_da(double side, double a, double b, double t) {
  const double s1 = a + 0.5 * side, s2 = b + 0.5 * side;
  const int R = image_count(side, t);
  double v = 0.0;
  for (int m = -R; m <= R; ++m) {
    const double u1 = s1 - s2 + 2.0 * m * side, u2 = s1 + s2 + 2.0 * m * side;
    v += -u1 / t * gaussian(u1, t) + u2 / t * gaussian(u2, t);
  }
  return v;
}

SpectrumMemo::SpectrumMemo(BoxSpec box, SpectralCache* disk) : box_(box), disk_(disk) {
  validate(box_);
}

std::shared_ptr<const SpectralData> SpectrumMemo::at(double omega) {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = memo_.find(omega);
    if (it != memo_.end()) return it->second;
  }
  std::optional<SpectralData> sd;
  if (disk_) sd = disk_->load(box_, omega, false);
  bool solved = false;
  if (!sd) {
    sd = spectrum(build_hamiltonian(box_, omega), {.vectors = false, .use_symmetry = true});
    solved = true;
    if (disk_) disk_->store(*sd);
  }
  auto ptr = std::make_shared<const SpectralData>(std::move(*sd));
  std::lock_guard<std::mutex> lk(mu_);
  if (solved) ++solves_;
  return memo_.emplace(omega, ptr).first->second;
}

void SpectrumMemo::prefetch(const std::vector<double>& omegas, int workers) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < omegas.size(); i = next++) at(omegas[i]);
  };
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(omegas.size())));
  if (nw == 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

std::vector<std::pair<int, double>> central_stencil(int n) {
  switch (n) {
    case 1: return {{-1, -0.5}, {1, 0.5}};
    case 2: return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
    case 3: return {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
    case 4: return {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}};
    default: throw ValidationError("finite-difference order must be 1..4");
  }
}

FdResult chi_L_fd(SpectrumMemo& memo, int n, double beta, double z, int eps, double omega,
                  const FdOptions& opt) {
  require(n >= 1 && n <= 4, "finite-difference order must be 1..4");
  require(std::isfinite(omega) && omega >= 0.0, "omega must be non-negative");
  require(opt.step > 0.0, "finite-difference step must be positive");
  const auto st = central_stencil(n);
  const int reach = st.back().first;
  const double hf = 0.5 * opt.step;
  if (omega > 0.0 && omega - reach * opt.step < 0.0)
    throw ValidationError("finite-difference stencil leaves omega >= 0");
  // pressure is even in omega, so a stencil centred at 0 reflects onto omega >= 0
  auto point = [&](int kk) { return std::abs(omega + kk * hf); };
  std::set<double> pts;
  for (const auto& [k, w] : st) {
    pts.insert(point(2 * k));
    pts.insert(point(k));
  }
  memo.prefetch(std::vector<double>(pts.begin(), pts.end()), opt.workers);
  auto diff = [&](int scale, double h) {
    double d = 0.0;
    for (const auto& [k, w] : st) d += w * pressure_L(*memo.at(point(scale * k)), beta, z, eps).value;
    return d / std::pow(h, n);
  };
  FdResult r;
  r.coarse = diff(2, opt.step);
  r.fine = diff(1, hf);
  if (opt.richardson) {
    r.value = (4.0 * r.fine - r.coarse) / 3.0;
    r.error_estimate = std::abs(r.value - r.fine);
  } else {
    r.value = r.coarse;
    r.error_estimate = std::abs(r.coarse - r.fine);
  }
  if (!std::isfinite(r.value)) throw NumericalError("non-finite finite-difference susceptibility");
  return r;
}

FdResult chi_L_fd(const BoxSpec& b, int n, double beta, double z, int eps, double omega,
                  const FdOptions& opt) {
  SpectrumMemo memo(b, opt.cache);
  return chi_L_fd(memo, n, beta, z, eps, omega, opt);
}

}  // namespace diamag::oracle
