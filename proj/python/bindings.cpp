#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "corrsense/classical_exponents.hpp"
#include "corrsense/detection_sim.hpp"
#include "corrsense/errors.hpp"
#include "corrsense/exponents.hpp"
#include "corrsense/fock_oracle.hpp"
#include "corrsense/quantum_exponents.hpp"
#include "corrsense/sweep.hpp"
#include "corrsense/validation.hpp"

namespace py = pybind11;
using namespace corrsense;

namespace {

LogBase base_of(const std::string& name) { return parse_log_base(name.c_str()); }

py::dict report_dict(const ExponentReport& r) {
  py::dict d;
  d["K"] = r.detectors;
  d["E"] = r.energy;
  d["base"] = to_string(r.base);
  d["quantum"] = r.quantum;
  d["heterodyne"] = r.heterodyne;
  d["homodyne"] = r.homodyne;
  d["photon"] = r.photon;
  d["ratio_quantum_heterodyne"] = r.ratio_quantum_heterodyne();
  d["ratio_quantum_homodyne"] = r.ratio_quantum_homodyne();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Error exponents for detecting classical correlations among optical detectors";

  auto base_error = py::register_exception<Error>(m, "CorrsenseError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<SingularityError>(m, "SingularityError", base_error.ptr());
  py::register_exception<NumericalInstabilityError>(m, "NumericalInstabilityError",
                                                    base_error.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("gordon_g", [](double x, const std::string& base) { return gordon_g(x, base_of(base)); },
        py::arg("x"), py::arg("base") = "nats");
  m.def("func_f", [](double x, const std::string& base) { return func_f(x, base_of(base)); },
        py::arg("x"), py::arg("base") = "nats");

  m.def(
      "exponent",
      [](const std::string& kind, int k, double e, const std::string& base) {
        return exponent(parse_exponent_kind(kind), EnergyParams(k, e), base_of(base));
      },
      py::arg("kind"), py::arg("k"), py::arg("energy"), py::arg("base") = "bits",
      "One of the quantum, heterodyne, homodyne or photon exponents.");
  m.def(
      "exponents",
      [](int k, double e, const std::string& base) {
        return report_dict(exponent_report(EnergyParams(k, e), base_of(base)));
      },
      py::arg("k"), py::arg("energy"), py::arg("base") = "bits");
  m.def(
      "taylor_coefficient",
      [](const std::string& kind, int k, int order, const std::string& base) {
        return taylor_coefficient(parse_exponent_kind(kind), k, order, base_of(base));
      },
      py::arg("kind"), py::arg("k"), py::arg("order"), py::arg("base") = "bits");
  m.def(
      "symplectic_eigenvalues",
      [](int k, double e) {
        return symplectic_eigenvalues(build_quantum_cov(EnergyParams(k, e))).values;
      },
      py::arg("k"), py::arg("energy"));
  m.def(
      "quantum_covariance",
      [](int k, double e) { return build_quantum_cov(EnergyParams(k, e)).matrix(); },
      py::arg("k"), py::arg("energy"));

  m.def(
      "sweep",
      [](std::vector<int> ks, double e_min, double e_max, int points, const std::string& base) {
        SweepSpec spec;
        spec.detector_counts = std::move(ks);
        spec.energy_min = e_min;
        spec.energy_max = e_max;
        spec.energy_points = points;
        spec.base = base_of(base);
        spec.validate();
        py::list rows;
        for (const auto& r : run_sweep(spec)) rows.append(report_dict(r));
        return rows;
      },
      py::arg("k"), py::arg("e_min") = 1e-4, py::arg("e_max") = 10.0, py::arg("points") = 60,
      py::arg("base") = "bits");

  m.def(
      "simulate",
      [](const std::string& strategy, int k, double e, double epsilon, std::vector<int> n_grid,
         int shots, std::uint64_t seed, const std::string& estimator, const std::string& base) {
        const Strategy s{parse_detection_kind(strategy), EnergyParams(k, e)};
        EstimateConfig cfg;
        cfg.epsilon = epsilon;
        cfg.n_grid = std::move(n_grid);
        cfg.shots = shots;
        cfg.seed = seed;
        cfg.estimator = parse_beta_estimator(estimator);
        cfg.base = base_of(base);
        std::vector<TestOutcome> out;
        {
          py::gil_scoped_release release;
          out = estimate_exponent(s, cfg);
        }
        py::list rows;
        for (const auto& o : out) {
          py::dict d;
          d["n"] = o.n;
          d["alpha_hat"] = o.alpha_hat;
          d["beta_hat"] = o.beta_hat;
          d["exponent_hat"] = o.exponent_hat;
          d["ci_low"] = o.ci_low;
          d["ci_high"] = o.ci_high;
          d["beta_upper_bound_only"] = o.beta_upper_bound_only;
          rows.append(d);
        }
        return rows;
      },
      py::arg("strategy"), py::arg("k"), py::arg("energy"), py::arg("epsilon") = 0.1,
      py::arg("n_grid") = std::vector<int>{50, 100, 200, 400}, py::arg("shots") = 10000,
      py::arg("seed") = 1, py::arg("estimator") = "weighted", py::arg("base") = "bits");

  m.def(
      "correlated_state",
      [](int k, double e, int cutoff) {
        return correlated_state(EnergyParams(k, e), cutoff).matrix();
      },
      py::arg("k"), py::arg("energy"), py::arg("cutoff"),
      "Density matrix of the correlated K-mode state on the truncated Fock space.");
  m.def(
      "thermal_state", [](double e, int cutoff) { return thermal_state(e, cutoff).matrix(); },
      py::arg("energy"), py::arg("cutoff"));
  m.def(
      "von_neumann_entropy",
      [](const Eigen::MatrixXcd& rho, int modes, int cutoff, const std::string& base) {
        return von_neumann_entropy(FockOperator(modes, cutoff, rho), base_of(base));
      },
      py::arg("rho"), py::arg("modes"), py::arg("cutoff"), py::arg("base") = "nats");

  m.def(
      "validate",
      [](const std::string& level) {
        if (level != "fast" && level != "full") throw UsageError("level must be fast or full");
        const auto report = run_validation(level == "full" ? ValidationLevel::full
                                                           : ValidationLevel::fast);
        return py::make_tuple(report.ok(), format_report(report));
      },
      py::arg("level") = "fast");
}
