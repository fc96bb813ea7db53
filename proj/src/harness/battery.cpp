#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <json.hpp>
#include <numbers>
#include <random>

#include "diamag/errors.hpp"
#include "diamag/harness.hpp"
#include "diamag/oracle.hpp"
#include "diamag/quadrature.hpp"
#include "diamag/rng.hpp"

namespace diamag {

bool BatteryReport::passed() const {
  for (const auto& s : suites)
    if (s.status == "fail") return false;
  return true;
}

std::string BatteryReport::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["budget"] = budget;
  j["passed"] = passed();
  j["suites"] = nlohmann::ordered_json::array();
  for (const auto& s : suites) {
    nlohmann::ordered_json e;
    e["name"] = s.name;
    e["status"] = s.status;
    e["max_deviation"] = std::isfinite(s.max_deviation) ? nlohmann::ordered_json(s.max_deviation)
                                                          : nlohmann::ordered_json(nullptr);
    e["samples"] = s.samples;
    e["detail"] = s.detail;
    j["suites"].push_back(e);
  }
  return j.dump(2);
}

namespace harness {

namespace {

using cd = std::complex<double>;

struct Ctx {
  const BatteryOptions& opt;
  std::size_t index;
  double sign;  // -1 when the suite is corrupted
  std::mt19937_64 rng() const { return stream_engine(opt.seed, 0xba77e7ULL, index); }
};

Point3 random_point(std::mt19937_64& g, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  const double a = u(g), b = u(g), c = u(g);
  return {a, b, c};
}

SuiteReport flux_algebra(const Ctx& c) {
  SuiteReport r{"flux_algebra", "pass", 0.0, c.opt.budget, ""};
  auto g = c.rng();
  std::uniform_int_distribution<int> len(1, 6);
  for (std::int64_t s = 0; s < c.opt.budget; ++s) {
    const Point3 x = random_point(g, 5.0), y = random_point(g, 5.0), z = random_point(g, 5.0);
    const double scale = 1.0 + x.norm2() + y.norm2() + z.norm2();
    const double t = magcore::tri_flux(x, y, z);
    r.max_deviation = std::max(r.max_deviation,
                               std::abs(t - c.sign * magcore::tri_flux_phases(x, y, z)) / scale);
    r.max_deviation =
        std::max(r.max_deviation, std::abs(t - magcore::tri_flux(y, z, x)) / scale);
    r.max_deviation = std::max(r.max_deviation, std::abs(t + magcore::tri_flux(y, x, z)) / scale);
    const Point3 shift = random_point(g, 3.0);
    r.max_deviation = std::max(
        r.max_deviation, std::abs(t - magcore::tri_flux(x + shift, y + shift, z + shift)) / scale);

    FluxChain ch{x, {}};
    const int n = len(g);
    double cs = 1.0 + x.norm2();
    for (int k = 0; k < n; ++k) {
      ch.nodes.push_back(random_point(g, 5.0));
      cs += ch.nodes.back().norm2();
    }
    const double pf = magcore::path_flux(ch);
    r.max_deviation = std::max(r.max_deviation, std::abs(pf - magcore::path_flux_phases(ch)) / cs);
    r.max_deviation =
        std::max(r.max_deviation, std::max(0.0, std::abs(pf) - magcore::path_flux_bound(ch)) / cs);
  }
  if (r.max_deviation > 1e-12) r.status = "fail";
  r.detail = "triangle, cyclic, antisymmetry, translation and chain identities";
  return r;
}

SuiteReport diamagnetic(const Ctx& c) {
  SuiteReport r{"diamagnetic", "pass", 0.0, c.opt.budget, ""};
  auto g = c.rng();
  std::uniform_real_distribution<double> lb(std::log(0.05), std::log(5.0)), om(0.0, 20.0);
  for (std::int64_t s = 0; s < c.opt.budget; ++s) {
    const Point3 x = random_point(g, 3.0), y = random_point(g, 3.0);
    const KernelParams p{std::exp(lb(g)), om(g)};
    const double free = mehler::free_heat_kernel(x, y, p.beta);
    const double m = mehler::mehler_kernel(x, y, p).modulus();
    const double excess = m - c.sign * free;
    const double allow = 4.0 * std::numeric_limits<double>::epsilon() * free;
    if (excess > allow) {
      r.status = "fail";
      r.max_deviation = std::max(r.max_deviation, excess / std::max(free, 1e-300));
    }
  }
  r.detail = "|G_omega(x,y)| <= G_0(x,y)";
  return r;
}

// int G(x,y;b1) G(y,x';b2) dy by Gauss-Hermite around the product Gaussian's centre.
cd semigroup_lhs(const Point3& x, const Point3& xp, double b1, double b2, double omega, int nodes) {
  const double c1 = mehler::u_over_tanh(0.5 * omega * b1) / b1;
  const double c2 = mehler::u_over_tanh(0.5 * omega * b2) / b2;
  const double A = c1 + c2, A3 = 1.0 / b1 + 1.0 / b2;
  const Point3 m{(c1 * x.x1 + c2 * xp.x1) / A, (c1 * x.x2 + c2 * xp.x2) / A,
                 (x.x3 / b1 + xp.x3 / b2) / A3};
  const double s = std::sqrt(2.0 / A), s3 = std::sqrt(2.0 / A3);
  const quad::Rule gh = quad::gauss_hermite(nodes);
  cd total = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i)
    for (std::size_t j = 0; j < gh.nodes.size(); ++j)
      for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
        const double ti = gh.nodes[i], tj = gh.nodes[j], tk = gh.nodes[k];
        const Point3 y{m.x1 + s * ti, m.x2 + s * tj, m.x3 + s3 * tk};
        const cd f = mehler::mehler_kernel(x, y, {b1, omega}).value() *
                     mehler::mehler_kernel(y, xp, {b2, omega}).value();
        total += gh.weights[i] * gh.weights[j] * gh.weights[k] * f *
                 std::exp(ti * ti + tj * tj + tk * tk);
      }
  return total * s * s * s3;
}

SuiteReport semigroup(const Ctx& c) {
  SuiteReport r{"semigroup", "pass", 0.0, 0, ""};
  const Point3 x{0.3, -0.2, 0.1}, xp{-0.4, 0.5, 0.2};
  const double cases[][3] = {{0.3, 0.7, 1.0}, {1.0, 1.0, 2.0}, {0.5, 1.5, 0.5}, {0.4, 0.6, 0.0}};
  for (const auto& cs : cases) {
    const cd lhs = c.sign * semigroup_lhs(x, xp, cs[0], cs[1], cs[2], 40);
    const cd rhs = mehler::mehler_kernel(x, xp, {cs[0] + cs[1], cs[2]}).value();
    r.max_deviation = std::max(r.max_deviation, std::abs(lhs - rhs) / std::abs(rhs));
    ++r.samples;
  }
  if (r.max_deviation > 1e-9) r.status = "fail";
  r.detail = "Chapman-Kolmogorov identity by 40^3 Gauss-Hermite";
  return r;
}

SuiteReport fk_deterministic(const Ctx& c) {
  SuiteReport r{"fk_deterministic", "pass", 0.0, 0, ""};
  for (double beta : {0.5, 1.0, 2.0})
    for (int k = 1; k <= 3; ++k) {
      const double exact = dyson::fk_closed_form(k, beta);
      const double q = c.sign * dyson::fk_deterministic(k, beta, 24);
      r.max_deviation = std::max(r.max_deviation, std::abs(q - exact) / exact);
      ++r.samples;
    }
  if (r.max_deviation > 1e-8) r.status = "fail";
  r.detail = "simplex quadrature of prod gap^-1/2 vs closed form, k = 1..3";
  return r;
}

SuiteReport fk_monte_carlo(const Ctx& c) {
  SuiteReport r{"fk_monte_carlo", "pass", 0.0, 0, ""};
  const std::int64_t n = std::max(c.opt.budget, dyson::kMinMonteCarloSamples);
  for (int k = 1; k <= 5; ++k) {
    const double exact = dyson::fk_closed_form(k, 1.0);
    const auto e = dyson::fk_monte_carlo(k, 1.0, n, splitmix64(c.opt.seed + k));
    const double z = std::abs(c.sign * e.value - exact) / e.std_error;
    r.max_deviation = std::max(r.max_deviation, z);
    r.samples += n;
  }
  if (r.max_deviation > 4.0) r.status = "fail";
  r.detail = "max |estimate - exact| in standard errors, k = 1..5";
  return r;
}

double fd_derivative(const std::function<double(double)>& f, int n, double x, double h) {
  auto d = [&](double s) {
    double acc = 0.0;
    for (const auto& [k, w] : oracle::central_stencil(n)) acc += w * f(x + k * s);
    return acc / std::pow(s, n);
  };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

SuiteReport jet_vs_fd(const Ctx& c) {
  SuiteReport r{"jet_vs_fd", "pass", 0.0, 0, ""};
  for (double omega : {0.5, 2.0, 7.0})
    for (int n = 1; n <= 4; ++n) {
      const KernelParams p{1.0, omega};
      const double jet = c.sign * mehler::diag_jet(n, p).derivative(n);
      const double fd = fd_derivative(
          [&](double w) { return mehler::mehler_diag({p.beta, w}); }, n, omega, 0.05);
      const double scale = mehler::mehler_diag(p) * std::pow(p.beta, n);
      r.max_deviation = std::max(r.max_deviation, std::abs(jet - fd) / scale);
      ++r.samples;
    }
  if (r.max_deviation > 1e-6) r.status = "fail";
  r.detail = "jet derivatives of the Mehler diagonal vs Richardson finite differences";
  return r;
}

SuiteReport assemble_deterministic(const Ctx& c) {
  SuiteReport r{"assemble_deterministic", "pass", 0.0, 0, ""};
  QuadratureSpec q;
  q.mode = QuadratureMode::deterministic;
  for (double omega : {0.0, 0.7, 2.0})
    for (int n = 1; n <= 3; ++n) {
      const KernelParams p{1.0, omega};
      const double jet = mehler::diag_jet(n, p).derivative(n);
      const auto a = dyson::assemble_derivative(n, p, q);
      const double scale = mehler::mehler_diag(p) * std::pow(p.beta, n);
      r.max_deviation = std::max(r.max_deviation, std::abs(c.sign * a.value - jet) / scale);
      ++r.samples;
    }
  if (r.max_deviation > 1e-8) r.status = "fail";
  r.detail = "expansion assembly (exact Gaussian chain integrals) vs jet, n = 1..3";
  return r;
}

SuiteReport assemble_monte_carlo(const Ctx& c) {
  SuiteReport r{"assemble_monte_carlo", "pass", 0.0, 0, ""};
  QuadratureSpec q;
  q.sample_count = std::max(c.opt.budget, dyson::kMinMonteCarloSamples);
  q.seed = c.opt.seed;
  q.worker_count = c.opt.workers;
  for (int n = 1; n <= 2; ++n) {
    const KernelParams p{1.0, 0.7};
    const double jet = mehler::diag_jet(n, p).derivative(n);
    const auto a = dyson::assemble_derivative(n, p, q);
    const double z = std::abs(c.sign * a.value - jet) / std::max(a.std_error, 1e-300);
    r.max_deviation = std::max(r.max_deviation, z);
    r.samples += a.terms_evaluated;
  }
  if (r.max_deviation > 4.0) r.status = "fail";
  r.detail = "max |assembled - jet| in standard errors, n = 1..2";
  return r;
}

SuiteReport ginibre_gruber(const Ctx& c) {
  SuiteReport r{"ginibre_gruber", "pass", 0.0, 0, ""};
  auto g = c.rng();
  const int trials = static_cast<int>(std::clamp<std::int64_t>(c.opt.budget / 100, 1, 2000));
  const auto rep = oracle::ginibre_gruber_check(trials, 6, g);
  r.samples = rep.trials;
  r.max_deviation = std::max(0.0, rep.max_ratio - 1.0);
  // identity insertions saturate the bound
  Eigen::MatrixXcd hh(2, 2);
  hh << 0.0, 0.0, 0.0, 2.0;
  const std::vector<Eigen::MatrixXcd> ids(2, Eigen::MatrixXcd::Identity(2, 2));
  const double eq = oracle::ginibre_gruber_ratio(hh, ids, {0.4, 0.6});
  r.max_deviation = std::max(r.max_deviation, std::abs(eq - c.sign * 1.0));
  if (rep.violations > 0 || r.max_deviation > 1e-10) r.status = "fail";
  r.detail = std::to_string(rep.violations) + " violations, max ratio " + fmt17(rep.max_ratio);
  return r;
}

SuiteReport trace_bound(const Ctx& c) {
  SuiteReport r{"trace_bound", "pass", 0.0, 0, ""};
  const BoxSpec box{4.0, 15, 24};
  oracle::SpectrumMemo memo(box);
  for (double beta : {0.5, 1.0, 2.0})
    for (double omega : {0.5, 1.0, 3.0}) {
      const double t = oracle::trace_semigroup_L(*memo.at(omega), {beta, omega}).value;
      const double t0 = oracle::trace_semigroup_L(*memo.at(0.0), {beta, 0.0}).value;
      r.max_deviation = std::max(r.max_deviation, (t - c.sign * t0) / t0);
      ++r.samples;
    }
  r.max_deviation = std::max(0.0, r.max_deviation);
  if (r.max_deviation > 1e-12) r.status = "fail";
  r.detail = "Tr exp(-beta H_L(omega)) <= Tr exp(-beta H_L(0)) on a 15x15 grid";
  return r;
}

struct Suite {
  const char* name;
  bool sampled;
  SuiteReport (*run)(const Ctx&);
};

constexpr Suite kSuites[] = {
    {"flux_algebra", true, flux_algebra},
    {"diamagnetic", true, diamagnetic},
    {"semigroup", false, semigroup},
    {"fk_deterministic", false, fk_deterministic},
    {"fk_monte_carlo", true, fk_monte_carlo},
    {"jet_vs_fd", false, jet_vs_fd},
    {"assemble_deterministic", false, assemble_deterministic},
    {"assemble_monte_carlo", true, assemble_monte_carlo},
    {"ginibre_gruber", true, ginibre_gruber},
    {"trace_bound", false, trace_bound},
};

}  // namespace

BatteryReport run_invariant_battery(const BatteryOptions& opt) {
  require(opt.budget >= 0, "budget must be >= 0");
  require(opt.workers >= 1, "workers must be >= 1");
  if (!opt.corrupt_suite.empty()) {
    bool known = false;
    for (const auto& s : kSuites) known = known || opt.corrupt_suite == s.name;
    require(known, "unknown suite '" + opt.corrupt_suite + "'");
  }
  BatteryReport rep;
  rep.seed = opt.seed;
  rep.budget = opt.budget;
  for (std::size_t i = 0; i < std::size(kSuites); ++i) {
    const Suite& s = kSuites[i];
    if (s.sampled && opt.budget == 0) {
      rep.suites.push_back({s.name, "skipped", 0.0, 0, "zero sample budget"});
      continue;
    }
    const Ctx ctx{opt, i, opt.corrupt_suite == s.name ? -1.0 : 1.0};
    try {
      rep.suites.push_back(s.run(ctx));
    } catch (const std::exception& e) {
      rep.suites.push_back({s.name, "fail", std::numeric_limits<double>::infinity(), 0, e.what()});
    }
  }
  return rep;
}

}  // namespace harness
}  // namespace diamag
