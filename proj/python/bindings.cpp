#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idrem/bounds.hpp"
#include "idrem/config.hpp"
#include "idrem/excitation.hpp"
#include "idrem/harness.hpp"
#include "idrem/lift.hpp"
#include "idrem/mixing.hpp"

namespace py = pybind11;
using namespace idrem;

namespace {

// Trace columns as arrays keyed by CSV header names.
py::dict trace_columns(const Trace& tr) {
  const auto rows = static_cast<Eigen::Index>(tr.rows.size());
  Vector t(rows), Omega(rows), err(rows), branch(rows), interval(rows);
  Matrix theta_true(rows, tr.n), theta_hat(rows, tr.n), omega(rows, tr.n), y(rows, tr.m);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const TraceRow& r = tr.rows[static_cast<std::size_t>(k)];
    t(k) = r.t;
    theta_true.row(k) = r.theta_true.transpose();
    theta_hat.row(k) = r.theta_hat.transpose();
    omega.row(k) = r.omega.transpose();
    y.row(k) = r.y;
    Omega(k) = r.Omega;
    branch(k) = r.branch == Branch::Drem ? 1.0 : 0.0;
    err(k) = r.err_inst;
    interval(k) = static_cast<double>(r.interval);
  }
  py::dict d;
  d["t"] = t;
  d["theta_true"] = theta_true;
  d["theta_hat"] = theta_hat;
  d["omega"] = omega;
  d["y"] = y;
  d["Omega"] = Omega;
  d["branch"] = branch;
  d["err_inst"] = err;
  d["interval"] = interval;
  return d;
}

py::dict levels(const ExcitationLevels& l) {
  py::dict d;
  d["t_r_plus"] = l.t_r_plus;
  d["t_e"] = l.t_e;
  d["Ts"] = l.Ts;
  d["alpha1"] = l.alpha1;
  d["alpha2"] = l.alpha2;
  d["alpha2_start"] = l.alpha2_start;
  d["lambda_max"] = l.lambda_max;
  d["satisfied"] = l.satisfied;
  return d;
}

}  // namespace

PYBIND11_MODULE(_idrem, m) {
  m.doc() = "Time-varying parameter identification with interval DREM";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("n", &Scenario::n)
      .def_readwrite("m", &Scenario::m)
      .def_readwrite("t_end", &Scenario::t_end)
      .def_readwrite("dt", &Scenario::dt)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("beta", &Scenario::beta)
      .def_readwrite("t_e", &Scenario::t_e)
      .def_readwrite("theta_hat0", &Scenario::theta_hat0)
      .def_property(
          "T", [](const Scenario& s) { return s.grid.T; }, [](Scenario& s, double v) { s.grid.T = v; })
      .def_property(
          "t_r_plus", [](const Scenario& s) { return s.grid.t_r_plus; },
          [](Scenario& s, double v) { s.grid.t_r_plus = v; })
      .def_property(
          "gamma0", [](const Scenario& s) { return s.gains.gamma0; }, [](Scenario& s, double v) { s.gains.gamma0 = v; })
      .def_property(
          "sigma", [](const Scenario& s) { return s.gains.sigma; }, [](Scenario& s, double v) { s.gains.sigma = v; })
      .def_property(
          "kappa", [](const Scenario& s) { return s.gains.kappa; }, [](Scenario& s, double v) { s.gains.kappa = v; })
      .def_property(
          "Gamma", [](const Scenario& s) { return s.gains.Gamma; },
          [](Scenario& s, const Matrix& v) { s.gains.Gamma = v; })
      .def("validate", &Scenario::validate)
      .def("to_config", [](const Scenario& s) { return to_config(s); })
      .def("__repr__", [](const Scenario& s) { return "<Scenario\n" + to_config(s) + ">"; });

  m.def("preset", [](const std::string& name) { return preset(name); }, py::arg("name"));
  m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  m.def(
      "run",
      [](const Scenario& s, std::int64_t log_stride) {
        RunOptions opts;
        opts.log_stride = log_stride;
        opts.record_steps = false;
        RunResult run;
        {
          py::gil_scoped_release release;
          run = run_scenario(s, opts);
        }
        return trace_columns(run.trace);
      },
      py::arg("scenario"), py::arg("log_stride") = 10,
      "Simulate and return the logged columns as numpy arrays.");

  m.def(
      "bounds",
      [](const Scenario& s, double Ts) {
        RunResult run;
        {
          py::gil_scoped_release release;
          run = run_scenario(s);
        }
        return format_bounds(audit_run(run, Ts));
      },
      py::arg("scenario"), py::arg("Ts") = 0.1, "Simulate, audit and return the bound report text.");

  m.def(
      "excitation",
      [](const Scenario& s, double t_r_plus, double t_e, double Ts) {
        const ExcitationReport rep = excitation_report(s, t_r_plus, t_e, Ts);
        py::dict d;
        d["raw"] = levels(rep.raw);
        if (rep.lifted) d["lifted"] = levels(*rep.lifted);
        return d;
      },
      py::arg("scenario"), py::arg("t_r_plus"), py::arg("t_e"), py::arg("Ts"));

  m.def(
      "sweep",
      [](const Scenario& base, const std::string& param, const std::vector<double>& values) {
        if (param != "T" && param != "gamma0") throw ConfigError("param: expected T or gamma0");
        std::vector<SweepPoint> pts;
        {
          py::gil_scoped_release release;
          pts = sweep(base, param == "T" ? SweepParam::T : SweepParam::Gamma0, values);
        }
        std::vector<std::pair<double, double>> out;
        for (const SweepPoint& p : pts) out.emplace_back(p.value, p.steady_state_error);
        return out;
      },
      py::arg("base"), py::arg("param"), py::arg("values"),
      "List of (value, steady-state error) pairs.");

  m.def("determinant", &determinant, py::arg("a"));
  m.def("adjugate", &adjugate, py::arg("a"));
  m.def(
      "min_max_eigenvalues",
      [](const Matrix& a) {
        const EigenRange r = min_max_eigenvalues(a);
        return std::make_pair(r.min, r.max);
      },
      py::arg("a"));
  m.def("lift", &lift, py::arg("omega"), py::arg("t"), py::arg("t_i"));
  m.def(
      "interval_index",
      [](double t, double T, double t_r_plus) {
        const GridPoint p = interval_index(t, TimeGridConfig{T, t_r_plus});
        return std::make_pair(p.index, p.t_i);
      },
      py::arg("t"), py::arg("T"), py::arg("t_r_plus") = 0.0);
}
