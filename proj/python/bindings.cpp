#include <array>
#include <map>
#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diamag/dyson.hpp"
#include "diamag/errors.hpp"
#include "diamag/harness.hpp"
#include "diamag/magcore.hpp"
#include "diamag/mehler.hpp"
#include "diamag/oracle.hpp"
#include "diamag/thermo.hpp"

namespace py = pybind11;
using namespace diamag;

namespace {

Point3 pt(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

py::dict series(const SeriesResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["tail_bound"] = r.tail_bound;
  d["terms"] = r.terms;
  return d;
}

}  // namespace

PYBIND11_MODULE(_diamag, m) {
  m.doc() = "Magnetic heat kernels, expansion estimates and finite-volume oracles";
  m.attr("__version__") = kVersion;

  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  static py::exception<ResourceError> resource(m, "ResourceError", PyExc_MemoryError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericalError& e) {
      numerical(e.what());
    } catch (const ResourceError& e) {
      resource(e.what());
    }
  });

  m.def("gauge_vector", [](std::array<double, 3> x) {
    const Point3 a = magcore::gauge_vector(pt(x));
    return std::array<double, 3>{a.x1, a.x2, a.x3};
  });
  m.def("phase", [](std::array<double, 3> x, std::array<double, 3> y) { return magcore::phase(pt(x), pt(y)); });
  m.def("tri_flux", [](std::array<double, 3> x, std::array<double, 3> y, std::array<double, 3> z) {
    return magcore::tri_flux(pt(x), pt(y), pt(z));
  });
  m.def("path_flux", [](std::array<double, 3> base, const std::vector<std::array<double, 3>>& nodes) {
    FluxChain c{pt(base), {}};
    for (const auto& n : nodes) c.nodes.push_back(pt(n));
    return magcore::path_flux(c);
  });

  m.def("free_heat_kernel", [](std::array<double, 3> x, std::array<double, 3> y, double beta) {
    return mehler::free_heat_kernel(pt(x), pt(y), beta);
  });
  m.def("mehler_kernel", [](std::array<double, 3> x, std::array<double, 3> y, double beta, double omega) {
    return mehler::mehler_kernel(pt(x), pt(y), {beta, omega}).value();
  }, py::arg("x"), py::arg("y"), py::arg("beta"), py::arg("omega"));
  m.def("mehler_diag", [](double beta, double omega) { return mehler::mehler_diag({beta, omega}); },
        py::arg("beta"), py::arg("omega"));
  m.def("diag_derivatives", [](int n, double beta, double omega) {
    const Jet j = mehler::diag_jet(n, {beta, omega});
    std::vector<double> d;
    for (int k = 0; k <= n; ++k) d.push_back(j.derivative(k));
    return d;
  }, py::arg("n"), py::arg("beta"), py::arg("omega"), "omega-derivatives 0..n of the Mehler diagonal");

  m.def("fk_closed_form", &dyson::fk_closed_form, py::arg("k"), py::arg("beta"));
  m.def("assemble_derivative",
        [](int n, double beta, double omega, std::int64_t samples, std::uint64_t seed, bool deterministic,
           int workers, bool antithetic) {
          QuadratureSpec q;
          q.mode = deterministic ? QuadratureMode::deterministic : QuadratureMode::monte_carlo;
          q.sample_count = samples;
          q.seed = seed;
          q.worker_count = workers;
          q.antithetic = antithetic;
          const auto r = dyson::assemble_derivative(n, {beta, omega}, q);
          py::dict d;
          d["value"] = r.value;
          d["std_error"] = r.std_error;
          d["imag"] = r.imag;
          d["imag_std_error"] = r.imag_std_error;
          d["samples"] = r.terms_evaluated;
          return d;
        },
        py::arg("n"), py::arg("beta"), py::arg("omega"), py::arg("samples") = 100000, py::arg("seed") = 1,
        py::arg("deterministic") = false, py::arg("workers") = 1, py::arg("antithetic") = false);

  m.def("pressure_infty", [](double beta, double omega, double z, int eps) {
    return series(thermo::pressure_infty({beta, omega, z, eps}));
  }, py::arg("beta"), py::arg("omega"), py::arg("z"), py::arg("eps") = 1);
  m.def("chi_infty", [](int n, double beta, double omega, double z, int eps) {
    return series(thermo::chi_infty(n, {beta, omega, z, eps}));
  }, py::arg("n"), py::arg("beta"), py::arg("omega"), py::arg("z"), py::arg("eps") = 1);

  m.def("box_eigenvalues", [](double side, int grid, double omega) -> Eigen::VectorXd {
    const BoxSpec b{side, grid, 1};
    return oracle::spectrum(oracle::build_hamiltonian(b, omega), {.vectors = false}).eigenvalues;
  }, py::arg("side"), py::arg("grid"), py::arg("omega"), "transverse lattice eigenvalues, ascending");
  m.def("pressure_L", [](double side, int grid, double beta, double omega, double z, int eps, int modes) {
    const BoxSpec b{side, grid, modes > 0 ? modes : oracle::longitudinal_modes_for(side, beta)};
    const auto s = oracle::spectrum(oracle::build_hamiltonian(b, omega), {.vectors = false});
    return series(oracle::pressure_L(s, beta, z, eps));
  }, py::arg("side"), py::arg("grid"), py::arg("beta"), py::arg("omega"), py::arg("z"), py::arg("eps") = 1,
     py::arg("modes") = 0);
  m.def("chi_L_fd", [](int n, double side, int grid, double beta, double omega, double z, int eps, double step) {
    const BoxSpec b{side, grid, oracle::longitudinal_modes_for(side, beta)};
    const auto r = oracle::chi_L_fd(b, n, beta, z, eps, omega, {.step = step});
    py::dict d;
    d["value"] = r.value;
    d["error_estimate"] = r.error_estimate;
    return d;
  }, py::arg("n"), py::arg("side"), py::arg("grid"), py::arg("beta"), py::arg("omega"), py::arg("z"),
     py::arg("eps") = 1, py::arg("step") = 0.02);

  m.def("run_invariant_battery", [](std::uint64_t seed, std::int64_t budget, const std::string& corrupt) {
    return harness::run_invariant_battery({seed, budget, 1, corrupt}).to_json();
  }, py::arg("seed") = 1, py::arg("budget") = 20000, py::arg("corrupt") = "", "JSON report string");
  m.def("run_convergence_study", [](const std::map<std::string, std::string>& config) {
    const StudyConfig c = harness::study_config_from(config);
    std::ostringstream os;
    harness::run_convergence_study(c, &os);
    return os.str();
  }, py::arg("config"), "CSV text of the study; config keys as in the CLI config file");
}
