#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <optional>
#include <thread>

#include "diamag/errors.hpp"
#include "diamag/harness.hpp"
#include "diamag/oracle.hpp"

namespace diamag::harness {

void validate(const StudyConfig& c) {
  thermo::validate(c.gas);
  require(c.L_list.size() >= 3, "convergence study needs at least three box sides");
  for (std::size_t i = 0; i < c.L_list.size(); ++i) {
    require(std::isfinite(c.L_list[i]) && c.L_list[i] > 0.0, "box sides must be positive");
    require(i == 0 || c.L_list[i] > c.L_list[i - 1], "box sides must be strictly ascending");
  }
  require(std::isfinite(c.spacing) && c.spacing > 0.0, "spacing must be positive");
  require(c.longitudinal_modes >= 0, "longitudinal_modes must be >= 0");
  require(!c.orders.empty(), "orders must not be empty");
  for (int n : c.orders) require(n >= 0 && n <= 4, "orders must lie in 0..4");
  require(std::isfinite(c.fd_step) && c.fd_step > 0.0, "fd_step must be positive");
  require(c.workers >= 1, "workers must be >= 1");
  for (double L : c.L_list) {
    const int N = grid_for(L, c.spacing);
    if (N > oracle::kMaxGrid)
      throw ResourceError("grid N=" + std::to_string(N) + " for L=" + fmt17(L) + " exceeds cap " +
                          std::to_string(oracle::kMaxGrid));
  }
}

int grid_for(double side, double spacing) {
  return std::max(2, static_cast<int>(std::lround(side / spacing)) - 1);
}

RateFit fit_rate(int order, const std::vector<double>& L, const std::vector<double>& d) {
  require(L.size() == d.size() && L.size() >= 3, "rate fit needs at least three points");
  RateFit f;
  f.order = order;
  const std::size_t n = L.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(L[i]);
    y[i] = std::log(std::abs(d[i]));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i] / n, my += y[i] / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - my - f.slope * (x[i] - mx);
    ssr += r * r;
  }
  f.std_error = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return f;
}

std::vector<std::string> study_columns(const StudyConfig& c) {
  std::vector<std::string> cols{"L", "N", "M", "h", "P_L", "P_inf", "abs_dP"};
  for (int n : c.orders) {
    if (n == 0) continue;
    const std::string s = std::to_string(n);
    for (const char* k : {"chi_L_", "chi_inf_", "abs_dchi_", "fd_err_"}) cols.push_back(k + s);
  }
  if (c.timing) cols.push_back("wall_time_s");
  return cols;
}

std::vector<std::string> study_cells(const StudyConfig& c, const ConvergenceRow& r) {
  std::vector<std::string> cells{fmt17(r.L),          std::to_string(r.N), std::to_string(r.M),
                                 fmt17(r.L / (r.N + 1)), fmt17(r.P_L),       fmt17(r.P_inf),
                                 fmt17(r.dP)};
  for (std::size_t i = 0; i < r.orders.size(); ++i) {
    cells.push_back(fmt17(r.chi_L[i]));
    cells.push_back(fmt17(r.chi_inf[i]));
    cells.push_back(fmt17(r.dchi[i]));
    cells.push_back(fmt17(r.chi_fd_error[i]));
  }
  if (c.timing) cells.push_back(fmt17(r.wall_time));
  return cells;
}

namespace {

ConvergenceRow study_row(const StudyConfig& c, double L, SpectralCache* cache) {
  const auto t0 = std::chrono::steady_clock::now();
  ConvergenceRow r;
  r.L = L;
  r.N = grid_for(L, c.spacing);
  r.M = c.longitudinal_modes > 0 ? c.longitudinal_modes : oracle::longitudinal_modes_for(L, c.gas.beta);
  const BoxSpec box{L, r.N, r.M};
  oracle::SpectrumMemo memo(box, cache);
  const GasParams& g = c.gas;

  r.P_L = oracle::pressure_L(*memo.at(g.omega), g.beta, g.z, g.eps).value;
  r.P_inf = thermo::pressure_infty(g).value;
  r.dP = std::abs(r.P_L - r.P_inf);
  for (int n : c.orders) {
    if (n == 0) continue;
    const FdResult fd = oracle::chi_L_fd(memo, n, g.beta, g.z, g.eps, g.omega,
                                         {.step = c.fd_step, .richardson = true, .workers = 1,
                                          .cache = cache});
    const double inf = thermo::chi_infty(n, g).value;
    r.orders.push_back(n);
    r.chi_L.push_back(fd.value);
    r.chi_inf.push_back(inf);
    r.dchi.push_back(std::abs(fd.value - inf));
    r.chi_fd_error.push_back(fd.error_estimate);
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

StudyResult run_convergence_study(const StudyConfig& c, std::ostream* csv) {
  validate(c);
  std::unique_ptr<SpectralCache> cache;
  if (!c.cache_dir.empty()) cache = std::make_unique<SpectralCache>(c.cache_dir);

  const std::size_t n = c.L_list.size();
  std::vector<std::optional<ConvergenceRow>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        rows[i] = study_row(c, c.L_list[i], cache.get());
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(c.workers, static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::optional<CsvWriter> out;
  const auto cols = study_columns(c);
  if (csv) {
    out.emplace(*csv, c.seed, config_hash(to_config_map(c)));
    out->header(cols);
  }
  StudyResult res;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      if (out) {
        std::string msg = "unknown error";
        try {
          std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
          msg = e.what();
        } catch (...) {
        }
        std::vector<std::string> cells(cols.size());
        cells[0] = "error";
        cells[1] = "L=" + fmt17(c.L_list[i]) + ": " + msg;
        out->row(cells);
      }
      std::rethrow_exception(errors[i]);
    }
    if (out) out->row(study_cells(c, *rows[i]));
    res.rows.push_back(*rows[i]);
  }

  std::vector<double> Ls, d;
  for (const auto& r : res.rows) Ls.push_back(r.L);
  for (int ord : c.orders) {
    d.clear();
    for (const auto& r : res.rows) {
      if (ord == 0) {
        d.push_back(r.dP);
      } else {
        for (std::size_t k = 0; k < r.orders.size(); ++k)
          if (r.orders[k] == ord) d.push_back(r.dchi[k]);
      }
    }
    const RateFit f = fit_rate(ord, Ls, d);
    res.fits.push_back(f);
    if (out)
      out->comment("fit order=" + std::to_string(ord) + " slope=" + fmt17(f.slope) +
                   " stderr=" + fmt17(f.std_error));
  }
  return res;
}

}  // namespace diamag::harness
