#include <CLI11.hpp>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>

#include "diamag/dyson.hpp"
#include "diamag/errors.hpp"
#include "diamag/harness.hpp"
#include "diamag/mehler.hpp"
#include "diamag/oracle.hpp"
#include "diamag/thermo.hpp"

using namespace diamag;
using harness::fmt17;

namespace {

Point3 parse_point(const std::string& s) {
  const auto v = harness::parse_real_list(s);
  if (v.size() != 3) throw ValidationError("point must have three comma-separated coordinates: " + s);
  return {v[0], v[1], v[2]};
}

std::string pre_scan_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw ValidationError("cannot open output file " + path);
    os = file.get();
  }
};

int run(int argc, char** argv) {
  harness::ConfigMap file_cfg;
  const std::string cfg_path = pre_scan_config(argc, argv);
  if (!cfg_path.empty()) file_cfg = harness::load_config_file(cfg_path);
  StudyConfig cfg = harness::study_config_from(file_cfg);

  CLI::App app{"Magnetic heat kernels, Dyson expansions and finite-volume oracles"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_arg, out = cfg.output;
  std::uint64_t seed = cfg.seed;
  int workers = cfg.workers;
  app.add_option("--config", config_arg, "key=value or JSON config file");
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--workers", workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output file (default stdout)");

  GasParams g = cfg.gas;
  auto gas_opts = [&](CLI::App* s, bool with_gas) {
    s->add_option("--beta", g.beta, "inverse temperature")->capture_default_str();
    s->add_option("--omega", g.omega, "cyclotron frequency")->capture_default_str();
    if (with_gas) {
      s->add_option("--z", g.z, "fugacity")->capture_default_str();
      s->add_option("--eps", g.eps, "+1 Fermi, -1 Bose")->capture_default_str();
    }
  };

  auto* kernel = app.add_subcommand("kernel", "evaluate G_inf (and G_L) at a pair of points");
  std::string xs = "0,0,0", ys = "0,0,0";
  double side = 0.0;
  int grid = 32, modes = 0;
  gas_opts(kernel, false);
  kernel->add_option("--x", xs, "first point x1,x2,x3")->capture_default_str();
  kernel->add_option("--y", ys, "second point y1,y2,y3")->capture_default_str();
  kernel->add_option("--L", side, "box side; also evaluates G_L when > 0");
  kernel->add_option("--N", grid, "transverse grid points")->capture_default_str();
  kernel->add_option("--M", modes, "longitudinal modes (0 = automatic)");

  auto* jet = app.add_subcommand("jet", "omega-derivatives of the Mehler diagonal");
  int order = 2;
  gas_opts(jet, false);
  jet->add_option("--order", order, "highest derivative order")->capture_default_str();

  auto* expand = app.add_subcommand("expand", "expansion estimate of an omega-derivative");
  int n_expand = 1;
  std::string mode = "mc";
  QuadratureSpec q;
  gas_opts(expand, false);
  expand->add_option("--n", n_expand, "derivative order")->capture_default_str();
  expand->add_option("--mode", mode, "mc or det")->check(CLI::IsMember({"mc", "det"}));
  expand->add_option("--samples", q.sample_count, "samples per composition")->capture_default_str();
  expand->add_option("--dilation", q.proposal_dilation, "proposal variance factor")->capture_default_str();
  expand->add_flag("--antithetic", q.antithetic, "antithetic x<->y reflection");
  expand->add_flag("--pilot", q.pilot_allocation, "pilot-based budget allocation");
  expand->add_option("--points", q.deterministic_points, "Gauss points per time dimension");

  auto* thermo_cmd = app.add_subcommand("thermo", "P_inf and chi_inf over a parameter grid");
  std::string betas, omegas, orders_s = "0,1,2";
  gas_opts(thermo_cmd, true);
  thermo_cmd->add_option("--betas", betas, "comma list of beta values (overrides --beta)");
  thermo_cmd->add_option("--omegas", omegas, "comma list of omega values (overrides --omega)");
  thermo_cmd->add_option("--orders", orders_s, "comma list of derivative orders")->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "finite-box spectra, P_L and chi_L");
  double o_side = 4.0, fd_step = cfg.fd_step;
  int o_grid = 31, o_modes = 0, eigs = 0;
  std::string o_orders = "0,1";
  gas_opts(oracle_cmd, true);
  oracle_cmd->add_option("--L", o_side, "box side")->capture_default_str();
  oracle_cmd->add_option("--N", o_grid, "transverse grid points")->capture_default_str();
  oracle_cmd->add_option("--M", o_modes, "longitudinal modes (0 = automatic)");
  oracle_cmd->add_option("--orders", o_orders, "derivative orders")->capture_default_str();
  oracle_cmd->add_option("--fd-step", fd_step, "finite-difference step")->capture_default_str();
  oracle_cmd->add_option("--eigs", eigs, "print the lowest transverse eigenvalues instead");

  auto* converge = app.add_subcommand("converge", "thermodynamic-limit convergence study");
  std::string L_list;
  double spacing = cfg.spacing;
  gas_opts(converge, true);
  converge->add_option("--L-list", L_list, "comma list of box sides");
  converge->add_option("--spacing", spacing, "grid spacing")->capture_default_str();
  converge->add_option("--orders", o_orders, "derivative orders");
  converge->add_option("--cache-dir", cfg.cache_dir, "spectral cache directory");
  converge->add_flag("--timing", cfg.timing, "append a wall-time column");

  auto* check = app.add_subcommand("check", "invariant battery (JSON report)");
  std::int64_t budget = BatteryOptions{}.budget;
  std::string corrupt;
  check->add_option("--budget", budget, "samples for sampled suites (0 skips them)")->capture_default_str();
  check->add_option("--corrupt", corrupt, "debug: flip a sign inside the named suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  Output o(out);
  std::ostream& os = *o.os;
  const KernelParams kp{g.beta, g.omega};
  harness::ConfigMap run_cfg = file_cfg;
  for (const auto& opt : app.get_subcommands().front()->get_options())
    if (opt->count() > 0 && !opt->get_lnames().empty())
      run_cfg["cli." + opt->get_lnames().front()] = opt->as<std::string>();
  const std::uint64_t hash = harness::config_hash(run_cfg);

  if (*kernel) {
    mehler::validate(kp);
    const Point3 x = parse_point(xs), y = parse_point(ys);
    harness::CsvWriter w(os, seed, hash);
    std::vector<std::string> cols{"x1", "x2", "x3", "y1", "y2", "y3", "beta", "omega",
                                  "G_inf_re", "G_inf_im", "G_free"};
    const auto G = mehler::mehler_kernel(x, y, kp);
    std::vector<double> vals{x.x1, x.x2, x.x3, y.x1, y.x2, y.x3, g.beta, g.omega, G.re, G.im,
                             mehler::free_heat_kernel(x, y, g.beta)};
    if (side > 0.0) {
      const BoxSpec b{side, grid, modes > 0 ? modes : oracle::longitudinal_modes_for(side, g.beta)};
      const auto s = oracle::spectrum(oracle::build_hamiltonian(b, g.omega));
      auto node = [&](double c) {
        return std::clamp(static_cast<int>(std::lround((c + 0.5 * side) / b.spacing() - 1.0)), 0, grid - 1);
      };
      const auto GL = oracle::heat_kernel_L_nodes(s, node(x.x1), node(x.x2), x.x3, node(y.x1),
                                                  node(y.x2), y.x3, g.beta);
      cols.insert(cols.end(), {"L", "N", "G_L_re", "G_L_im"});
      vals.insert(vals.end(), {side, double(grid), GL.real(), GL.imag()});
    }
    w.header(cols);
    w.row(vals);
  } else if (*jet) {
    const OmegaJet j = mehler::diag_jet(order, kp);
    harness::CsvWriter w(os, seed, hash);
    w.header({"beta", "omega", "n", "derivative"});
    for (int n = 0; n <= order; ++n) w.row(std::vector<double>{g.beta, g.omega, double(n), j.derivative(n)});
  } else if (*expand) {
    q.mode = mode == "det" ? QuadratureMode::deterministic : QuadratureMode::monte_carlo;
    q.seed = seed;
    q.worker_count = workers;
    const auto r = dyson::assemble_derivative(n_expand, kp, q);
    const double ref = mehler::diag_jet(n_expand, kp).derivative(n_expand);
    harness::CsvWriter w(os, seed, hash);
    w.header({"beta", "omega", "n", "value", "std_error", "imag", "imag_std_error", "samples", "jet"});
    w.row(std::vector<double>{g.beta, g.omega, double(n_expand), r.value, r.std_error, r.imag,
                              r.imag_std_error, double(r.terms_evaluated), ref});
  } else if (*thermo_cmd) {
    const auto bl = betas.empty() ? std::vector<double>{g.beta} : harness::parse_real_list(betas);
    const auto wl = omegas.empty() ? std::vector<double>{g.omega} : harness::parse_real_list(omegas);
    const auto nl = harness::parse_int_list(orders_s);
    harness::CsvWriter w(os, seed, hash);
    w.header({"beta", "omega", "z", "eps", "n", "value", "tail_bound", "terms"});
    for (double b : bl)
      for (double om : wl)
        for (int n : nl) {
          GasParams gp{b, om, g.z, g.eps};
          const SeriesResult r = n == 0 ? thermo::pressure_infty(gp) : thermo::chi_infty(n, gp);
          w.row(std::vector<double>{b, om, g.z, double(g.eps), double(n), r.value, r.tail_bound,
                                    double(r.terms)});
        }
  } else if (*oracle_cmd) {
    const BoxSpec b{o_side, o_grid, o_modes > 0 ? o_modes : oracle::longitudinal_modes_for(o_side, g.beta)};
    oracle::SpectrumMemo memo(b);
    harness::CsvWriter w(os, seed, hash);
    if (eigs > 0) {
      const auto s = memo.at(g.omega);
      w.header({"L", "N", "omega", "index", "eigenvalue"});
      for (int i = 0; i < std::min<int>(eigs, s->eigenvalues.size()); ++i)
        w.row(std::vector<double>{o_side, double(o_grid), g.omega, double(i), s->eigenvalues(i)});
    } else {
      thermo::validate(g);
      w.header({"L", "N", "M", "beta", "omega", "z", "eps", "n", "value", "error_estimate"});
      for (int n : harness::parse_int_list(o_orders)) {
        double v, e;
        if (n == 0) {
          const auto r = oracle::pressure_L(*memo.at(g.omega), g.beta, g.z, g.eps);
          v = r.value;
          e = r.tail_bound;
        } else {
          const auto r = oracle::chi_L_fd(memo, n, g.beta, g.z, g.eps, g.omega,
                                          {.step = fd_step, .richardson = true, .workers = workers});
          v = r.value;
          e = r.error_estimate;
        }
        w.row(std::vector<double>{o_side, double(o_grid), double(b.longitudinal_modes), g.beta,
                                  g.omega, g.z, double(g.eps), double(n), v, e});
      }
    }
  } else if (*converge) {
    cfg.gas = g;
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.spacing = spacing;
    if (!L_list.empty()) cfg.L_list = harness::parse_real_list(L_list);
    if (converge->get_option("--orders")->count() > 0) cfg.orders = harness::parse_int_list(o_orders);
    const auto res = harness::run_convergence_study(cfg, &os);
    for (const auto& f : res.fits)
      std::cerr << "order " << f.order << ": slope " << fmt17(f.slope) << " +/- " << fmt17(f.std_error)
                << '\n';
  } else if (*check) {
    const auto rep = harness::run_invariant_battery({seed, budget, workers, corrupt});
    os << rep.to_json() << '\n';
    for (const auto& s : rep.suites)
      if (s.status == "fail") std::cerr << "suite failed: " << s.name << '\n';
    return rep.passed() ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
