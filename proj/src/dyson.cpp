#include "diamag/dyson.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "diamag/errors.hpp"
#include "diamag/quadrature.hpp"
#include "diamag/rng.hpp"

namespace diamag::dyson {

namespace {

using cd = std::complex<double>;

constexpr std::int64_t kChunk = 4096;

struct Moments {
  std::int64_t n = 0;
  double mean_re = 0, mean_im = 0, m2_re = 0, m2_im = 0;

  void add(cd v) {
    ++n;
    const double dr = v.real() - mean_re, di = v.imag() - mean_im;
    mean_re += dr / n;
    mean_im += di / n;
    m2_re += dr * (v.real() - mean_re);
    m2_im += di * (v.imag() - mean_im);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    const std::int64_t t = n + o.n;
    const double dr = o.mean_re - mean_re, di = o.mean_im - mean_im;
    const double f = static_cast<double>(n) * o.n / t;
    mean_re += dr * o.n / t;
    mean_im += di * o.n / t;
    m2_re += o.m2_re + dr * dr * f;
    m2_im += o.m2_im + di * di * f;
    n = t;
  }

  double se_re() const { return n > 1 ? std::sqrt(m2_re / (n - 1) / n) : 0.0; }
  double se_im() const { return n > 1 ? std::sqrt(m2_im / (n - 1) / n) : 0.0; }
};

// Chunked reduction: chunk c always draws from stream (seed, tag, c) and is merged in index order.
template <class F>
Moments run_chunks(std::int64_t samples, int workers, const F& chunk_fn) {
  const std::int64_t nchunks = (samples + kChunk - 1) / kChunk;
  std::vector<Moments> parts(nchunks);
  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (std::int64_t c = next++; c < nchunks; c = next++) {
      const std::int64_t count = std::min(kChunk, samples - c * kChunk);
      parts[c] = chunk_fn(c, count);
    }
  };
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(nchunks)));
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  Moments total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

std::uint64_t term_tag(const Composition& c, int m) {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(m) + 0x51ULL);
  for (int i : c.parts) h = splitmix64(h ^ static_cast<std::uint64_t>(i));
  return h;
}

double log_normal_density(double x, double var) {
  return -0.5 * (x * x / var + std::log(2.0 * std::numbers::pi * var));
}

// Spatial proposal: independent Gaussian bridges per coordinate with the given link variances.
struct BridgeProposal {
  std::vector<double> var_t, var_l;  // per link, j+1 entries

  void draw(std::mt19937_64& rng, std::vector<Point3>& delta) const {
    std::normal_distribution<double> nd;
    const int j = static_cast<int>(delta.size());
    double rem_t = 0, rem_l = 0;
    for (double v : var_t) rem_t += v;
    for (double v : var_l) rem_l += v;
    Point3 prev{};
    for (int a = 0; a < j; ++a) {
      const double kt = (rem_t - var_t[a]) / rem_t, kl = (rem_l - var_l[a]) / rem_l;
      const double st = std::sqrt(var_t[a] * kt), sl = std::sqrt(var_l[a] * kl);
      Point3 cur;
      cur.x1 = prev.x1 * kt + st * nd(rng);
      cur.x2 = prev.x2 * kt + st * nd(rng);
      cur.x3 = prev.x3 * kl + sl * nd(rng);
      delta[a] = cur;
      prev = cur;
      rem_t -= var_t[a];
      rem_l -= var_l[a];
    }
  }

  double log_density(const std::vector<Point3>& delta) const {
    const int j = static_cast<int>(delta.size());
    double vt = 0, vl = 0, lp = 0;
    for (int l = 0; l <= j; ++l) {
      const Point3 a = l == 0 ? Point3{} : delta[l - 1];
      const Point3 b = l == j ? Point3{} : delta[l];
      const Point3 d = a - b;
      lp += log_normal_density(d.x1, var_t[l]) + log_normal_density(d.x2, var_t[l]) +
            log_normal_density(d.x3, var_l[l]);
      vt += var_t[l];
      vl += var_l[l];
    }
    return lp - 2.0 * log_normal_density(0.0, vt) - log_normal_density(0.0, vl);
  }
};

void validate_composition(const Composition& c) {
  require(c.length() >= 1, "composition must be non-empty");
  int s = 0;
  for (int i : c.parts) {
    require(i == 1 || i == 2, "composition parts must be 1 or 2");
    s += i;
  }
  require(s == c.order_sum, "composition order_sum inconsistent with parts");
}

ExpansionResult to_result(const Moments& mo, double scale) {
  ExpansionResult r;
  r.value = scale * mo.mean_re;
  r.imag = scale * mo.mean_im;
  r.std_error = std::abs(scale) * mo.se_re();
  r.imag_std_error = std::abs(scale) * mo.se_im();
  r.terms_evaluated = mo.n;
  if (!std::isfinite(r.value) || !std::isfinite(r.imag) || !std::isfinite(r.std_error))
    throw NumericalError("non-finite Monte-Carlo estimate");
  return r;
}

ExpansionResult w_term_mc(const Composition& c, int m, const KernelParams& p,
                          const QuadratureSpec& q, const Point3& x, std::uint64_t tag) {
  const int j = c.length();
  const double lam = q.proposal_dilation;
  auto chunk = [&](std::int64_t idx, std::int64_t count) {
    auto rng = stream_engine(q.seed, tag, static_cast<std::uint64_t>(idx));
    Moments mo;
    std::vector<Point3> delta(j), nodes(j);
    BridgeProposal prop{std::vector<double>(j + 1), std::vector<double>(j + 1)};
    for (std::int64_t s = 0; s < count; ++s) {
      const SimplexSample ts = sample_simplex(j, p.beta, rng);
      for (int l = 0; l <= j; ++l) {
        const double hi = l == 0 ? p.beta : ts.times[l - 1];
        const double lo = l == j ? 0.0 : ts.times[l];
        const double t = hi - lo;
        prop.var_l[l] = lam * t;
        prop.var_t[l] = lam * t / mehler::u_over_tanh(0.5 * p.omega * t);
      }
      prop.draw(rng, delta);
      const double inv_q = std::exp(-prop.log_density(delta));
      for (int a = 0; a < j; ++a) nodes[a] = x + delta[a];
      cd v = chain_integrand(c, m, x, nodes, ts, p) * (ts.weight * inv_q);
      if (q.antithetic) {
        for (int a = 0; a < j; ++a) nodes[a] = x + Point3{delta[a].x2, delta[a].x1, delta[a].x3};
        v = 0.5 * (v + chain_integrand(c, m, x, nodes, ts, p) * (ts.weight * inv_q));
      }
      mo.add(v);
    }
    return mo;
  };
  return to_result(run_chunks(q.sample_count, q.worker_count, chunk), 1.0);
}

ExpansionResult w_term_deterministic(const Composition& c, int m, const KernelParams& p,
                                     const QuadratureSpec& q) {
  const int j = c.length();
  require(j <= 3 && m <= 2, "deterministic mode supports chain length <= 3 and m <= 2");
  const cd v = quad::integrate_simplex_complex(
      j, p.beta, q.deterministic_points,
      [&](const std::vector<double>& gaps) { return chain_spatial_integral(c, m, gaps, p.omega); });
  ExpansionResult r;
  r.value = v.real();
  r.imag = v.imag();
  r.terms_evaluated = static_cast<std::int64_t>(std::pow(q.deterministic_points, j));
  if (!std::isfinite(r.value) || !std::isfinite(r.imag))
    throw NumericalError("non-finite deterministic estimate");
  return r;
}

}  // namespace

std::vector<Composition> enumerate_compositions(int n, int cap) {
  require(n >= 1 && n <= cap, "composition order out of range");
  std::vector<Composition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rest) -> void {
    if (rest == 0) {
      out.push_back({cur, n});
      return;
    }
    for (int part : {1, 2}) {
      if (part > rest) continue;
      cur.push_back(part);
      self(self, rest - part);
      cur.pop_back();
    }
  };
  rec(rec, n);
  std::stable_sort(out.begin(), out.end(),
                   [](const Composition& a, const Composition& b) { return a.length() < b.length(); });
  return out;
}

SimplexSample sample_simplex(int j, double beta, std::mt19937_64& rng) {
  require(j >= 1, "simplex dimension must be at least 1");
  require(beta > 0.0, "beta must be positive");
  std::uniform_real_distribution<double> ud(0.0, beta);
  SimplexSample s;
  s.times.resize(j);
  for (auto& t : s.times) {
    do t = ud(rng);
    while (t <= 0.0);
  }
  std::sort(s.times.begin(), s.times.end(), std::greater<>());
  s.weight = std::pow(beta, j) / std::tgamma(j + 1.0);
  return s;
}

double fk_closed_form(int k, double beta) {
  require(k >= 1, "k must be at least 1");
  require(beta > 0.0, "beta must be positive");
  return std::pow(beta, 0.5 * (k - 1)) * std::pow(std::numbers::pi, 0.5 * (k + 1)) /
         std::tgamma(0.5 * (k + 1));
}

double fk_integrand(const SimplexSample& s, double beta) {
  double prod = beta - s.times.front();
  for (std::size_t i = 0; i + 1 < s.times.size(); ++i) prod *= s.times[i] - s.times[i + 1];
  prod *= s.times.back();
  return 1.0 / std::sqrt(prod);
}

ExpansionResult fk_monte_carlo(int k, double beta, std::int64_t samples, std::uint64_t seed) {
  require(samples >= kMinMonteCarloSamples, "too few samples to estimate variance");
  const std::uint64_t tag = splitmix64(0xf0ULL + static_cast<std::uint64_t>(k));
  auto chunk = [&](std::int64_t idx, std::int64_t count) {
    auto rng = stream_engine(seed, tag, static_cast<std::uint64_t>(idx));
    Moments mo;
    for (std::int64_t s = 0; s < count; ++s) {
      const SimplexSample ts = sample_simplex(k, beta, rng);
      mo.add(ts.weight * fk_integrand(ts, beta));
    }
    return mo;
  };
  return to_result(run_chunks(samples, 1, chunk), 1.0);
}

double fk_deterministic(int k, double beta, int points_per_dim) {
  return quad::integrate_simplex(k, beta, points_per_dim, [](const std::vector<double>& gaps) {
    double prod = 1.0;
    for (double g : gaps) prod *= g;
    return 1.0 / std::sqrt(prod);
  });
}

cd chain_integrand(const Composition& c, int m, const Point3& x, const std::vector<Point3>& nodes,
                   const SimplexSample& s, const KernelParams& p) {
  validate_composition(c);
  const int j = c.length();
  require(static_cast<int>(nodes.size()) == j, "node count must equal chain length");
  require(static_cast<int>(s.times.size()) == j, "time count must equal chain length");
  require(m >= 0, "flux power must be non-negative");
  if (j == 1 && m > 0) return 0.0;
  cd v = mehler::mehler_kernel(x, nodes[0], {p.beta - s.times[0], p.omega}).value();
  for (int l = 0; l < j; ++l) {
    const Point3& a = nodes[l];
    const Point3& b = l + 1 < j ? nodes[l + 1] : x;
    const double t = l + 1 < j ? s.times[l] - s.times[l + 1] : s.times[l];
    v *= mehler::r_infty(c.parts[l], a, b, {t, p.omega}).value();
  }
  if (m > 0) {
    const double fl = magcore::path_flux({x, nodes});
    v *= std::pow(cd(0.0, fl), m) / std::tgamma(m + 1.0);
  }
  return v;
}

ExpansionResult w_term_infty(const Composition& c, int m, const KernelParams& p,
                             const QuadratureSpec& q, const Point3& x) {
  validate_composition(c);
  mehler::validate(p);
  magcore::check_finite(x);
  require(m >= 0, "flux power must be non-negative");
  if (c.length() == 1 && m > 0) return {};
  if (q.mode == QuadratureMode::deterministic) return w_term_deterministic(c, m, p, q);
  require(q.sample_count >= kMinMonteCarloSamples, "too few samples to estimate variance");
  require(q.proposal_dilation >= 1.0, "proposal dilation must be at least 1");
  return w_term_mc(c, m, p, q, x, term_tag(c, m));
}

ExpansionResult assemble_derivative(int n, const KernelParams& p, const QuadratureSpec& q,
                                    const Point3& x, int cap) {
  require(n >= 1 && n <= cap, "derivative order exceeds cap");
  struct Term {
    Composition c;
    int m;
  };
  std::vector<Term> terms;
  for (int k = 1; k <= n; ++k)
    for (const auto& c : enumerate_compositions(k))
      if (!(c.length() == 1 && n - k > 0)) terms.push_back({c, n - k});

  std::vector<std::int64_t> budget(terms.size(), q.sample_count);
  if (q.mode == QuadratureMode::monte_carlo && q.pilot_allocation && terms.size() > 1) {
    QuadratureSpec pilot = q;
    pilot.sample_count = std::max<std::int64_t>(kMinMonteCarloSamples * 10, q.sample_count / 100);
    pilot.seed = splitmix64(q.seed ^ 0x9117ULL);
    std::vector<double> sigma(terms.size());
    double total_sigma = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto r = w_term_infty(terms[i].c, terms[i].m, p, pilot, x);
      sigma[i] = std::hypot(r.std_error, r.imag_std_error) * std::sqrt(double(pilot.sample_count));
      total_sigma += sigma[i];
    }
    const double pool = static_cast<double>(q.sample_count) * terms.size();
    for (std::size_t i = 0; i < terms.size(); ++i)
      budget[i] = total_sigma > 0.0
                      ? std::max<std::int64_t>(kMinMonteCarloSamples,
                                               static_cast<std::int64_t>(pool * sigma[i] / total_sigma))
                      : q.sample_count;
  }

  ExpansionResult total;
  double var = 0.0, var_im = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    QuadratureSpec qi = q;
    qi.sample_count = budget[i];
    const auto r = w_term_infty(terms[i].c, terms[i].m, p, qi, x);
    const double sign = terms[i].c.length() % 2 == 0 ? 1.0 : -1.0;
    total.value += sign * r.value;
    total.imag += sign * r.imag;
    var += r.std_error * r.std_error;
    var_im += r.imag_std_error * r.imag_std_error;
    total.terms_evaluated += r.terms_evaluated;
  }
  const double nf = std::tgamma(n + 1.0);
  total.value *= nf;
  total.imag *= nf;
  total.std_error = nf * std::sqrt(var);
  total.imag_std_error = nf * std::sqrt(var_im);
  if (!std::isfinite(total.value) || !std::isfinite(total.std_error))
    throw NumericalError("non-finite assembled derivative");
  return total;
}

}  // namespace diamag::dyson
