#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qsl/config.hpp"
#include "qsl/errors.hpp"
#include "qsl/experiments.hpp"
#include "qsl/qbm_gaussian.hpp"
#include "qsl/transforms.hpp"

namespace py = pybind11;
using namespace qsl;

namespace {

PNorm to_p(const py::object& p) {
  if (py::isinstance<py::str>(p)) return PNorm::parse(p.cast<std::string>());
  const double v = p.cast<double>();
  return std::isinf(v) ? PNorm::infinity() : PNorm::finite(v);
}

UniformGrid1D make_grid(double lo, double hi, std::size_t n) { return UniformGrid1D(lo, hi, n); }

py::dict series_dict(const RunSeries& s) {
  py::dict d;
  std::vector<std::string> labels;
  for (const auto& p : s.norms) labels.push_back(p.label());
  d["t"] = s.times;
  d["p"] = labels;
  d["kernel_distance"] = s.kernel_distance;
  d["kernel_speed"] = s.kernel_speed;
  d["wigner_distance"] = s.wigner_distance;
  d["wigner_speed"] = s.wigner_speed;
  d["fidelity"] = s.fidelity;
  return d;
}

RunConfig config_from(const std::string& preset_name, const py::dict& overrides) {
  RunConfig c = preset_name.empty() ? RunConfig{} : preset(preset_name);
  if (!overrides.empty()) {
    const auto text = py::module_::import("json").attr("dumps")(overrides).cast<std::string>();
    c.apply_json(nlohmann::json::parse(text));
  }
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_wignerqsl, m) {
  m.doc() = "Quantum speed limits from density kernels and Wigner functions";

  static py::exception<Error> base(m, "QslError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<UniformGrid1D>(m, "Grid")
      .def(py::init(&make_grid), py::arg("min"), py::arg("max"), py::arg("n"))
      .def_property_readonly("spacing", &UniformGrid1D::spacing)
      .def_property_readonly("size", &UniformGrid1D::size)
      .def("points", &UniformGrid1D::points);

  py::class_<PhaseGrid>(m, "PhaseGrid")
      .def(py::init<UniformGrid1D, UniformGrid1D>(), py::arg("x"), py::arg("p"))
      .def_property_readonly("x", &PhaseGrid::x)
      .def_property_readonly("p", &PhaseGrid::p)
      .def_property_readonly("cell_area", &PhaseGrid::cell_area);

  py::class_<DensityKernel>(m, "DensityKernel")
      .def(py::init([](const UniformGrid1D& g, const ComplexMatrix& v, double t) { return DensityKernel{g, v, t}; }),
           py::arg("grid"), py::arg("values"), py::arg("time") = 0.0)
      .def_readonly("grid", &DensityKernel::grid)
      .def_readonly("values", &DensityKernel::values)
      .def_readonly("time", &DensityKernel::time)
      .def("trace", &DensityKernel::trace)
      .def("purity", &DensityKernel::purity);

  py::class_<WignerField>(m, "WignerField")
      .def(py::init([](const PhaseGrid& g, const Eigen::MatrixXd& v, double t, double hbar) {
             require_shape(v, g, "WignerField");
             return WignerField{g, v, t, hbar};
           }),
           py::arg("grid"), py::arg("values"), py::arg("time") = 0.0, py::arg("hbar") = 1.0)
      .def_readonly("grid", &WignerField::grid)
      .def_readonly("values", &WignerField::values)
      .def_readonly("time", &WignerField::time)
      .def("norm", &WignerField::norm)
      .def("purity", &WignerField::purity);

  m.def(
      "ground_state_kernel",
      [](const UniformGrid1D& g, double mass, double hbar, double omega0) {
        return ground_state_kernel(OscillatorParams{mass, hbar, omega0, omega0}, g);
      },
      py::arg("grid"), py::arg("mass") = 1.0, py::arg("hbar") = 1.0, py::arg("omega0") = 1.0);

  m.def(
      "parametric_kernels",
      [](const UniformGrid1D& g, const std::vector<double>& times, double omega0, double omega1, double tau,
         double mass, double hbar) {
        const OscillatorParams osc{mass, hbar, omega0, omega1};
        const AuxTrajectory traj = solve_aux_ode(FrequencyProtocol{omega0, omega1, tau}, tau / 4000.0);
        std::vector<DensityKernel> out;
        for (double t : times) out.push_back(parametric_kernel(osc, traj, t, g));
        return out;
      },
      py::arg("grid"), py::arg("times"), py::arg("omega0") = 1.0, py::arg("omega1") = 2.0, py::arg("tau") = 1.0,
      py::arg("mass") = 1.0, py::arg("hbar") = 1.0);

  m.def("gaussian_wigner",
        [](const PhaseGrid& g, double mu_x, double sigma_x, double mu_p, double sigma_p, double hbar) {
          return gaussian_wigner(GaussianSpec{mu_x, sigma_x, mu_p, sigma_p}, g, hbar);
        },
        py::arg("grid"), py::arg("mu_x"), py::arg("sigma_x"), py::arg("mu_p"), py::arg("sigma_p"),
        py::arg("hbar") = 1.0);

  m.def("wigner_phase_grid", &wigner_phase_grid, py::arg("grid"), py::arg("hbar") = 1.0);
  m.def("wigner_transform", py::overload_cast<const DensityKernel&, double>(&wigner_transform), py::arg("rho"),
        py::arg("hbar") = 1.0);
  m.def("inverse_wigner_transform", &inverse_wigner_transform, py::arg("w"), py::arg("grid"));

  m.def(
      "schatten_norm",
      [](const ComplexMatrix& a, double spacing, const py::object& p) { return schatten_norm(a, spacing, to_p(p)); },
      py::arg("samples"), py::arg("spacing"), py::arg("p") = 1.0);
  m.def(
      "wasserstein_norm",
      [](const Eigen::MatrixXd& f, const PhaseGrid& g, const py::object& p) { return wasserstein_norm(f, g, to_p(p)); },
      py::arg("values"), py::arg("grid"), py::arg("p") = 1.0);
  m.def("pure_fidelity", &pure_fidelity, py::arg("reference"), py::arg("rho"));
  m.def("bures_angle", &bures_angle, py::arg("fidelity"));

  m.def(
      "qbm_rhs",
      [](const WignerField& w, double gamma, double beta, double mass, double hbar, double omega0) {
        return qbm_rhs(w, QbmParams{gamma, beta, mass, hbar, omega0});
      },
      py::arg("w"), py::arg("gamma") = 2.0, py::arg("beta") = 1.0, py::arg("mass") = 1.0, py::arg("hbar") = 1.0,
      py::arg("omega0") = 1.0);
  m.def(
      "qbm_evolve",
      [](const WignerField& w0, double t_final, std::size_t output_steps, double gamma, double beta) {
        return qbm_evolve_auto(w0, QbmParams{gamma, beta, 1.0, w0.hbar, 1.0}, t_final, output_steps);
      },
      py::arg("w0"), py::arg("t_final"), py::arg("output_steps"), py::arg("gamma") = 2.0, py::arg("beta") = 1.0);

  m.def("preset_names", &preset_names);
  m.def("config_keys", &config_keys);
  m.def(
      "run_fig1",
      [](double tau, const std::string& preset_name, const py::dict& overrides) {
        const RunConfig c = config_from(preset_name, overrides);
        Fig1Run r;
        {
          py::gil_scoped_release release;
          r = run_fig1_tau(c, tau);
        }
        py::dict d = series_dict(r.series);
        d["stationary"] = r.stationary;
        d["max_normalized_deviation"] = r.max_normalized_deviation;
        d["tau_qsl_w"] = r.tau_qsl_w;
        d["checks_passed"] = r.checks.passed();
        return d;
      },
      py::arg("tau"), py::arg("preset") = "fig1", py::arg("overrides") = py::dict());
  m.def(
      "run_fig2",
      [](const std::string& preset_name, const py::dict& overrides) {
        const RunConfig c = config_from(preset_name, overrides);
        Fig2Run r;
        {
          py::gil_scoped_release release;
          r = run_fig2_beta(c, c.qbm_beta);
        }
        py::dict d = series_dict(r.series);
        d["norm_check"] = r.norm_check;
        d["tau_qsl_w"] = r.tau_qsl_w;
        d["checks_passed"] = r.checks.passed();
        return d;
      },
      py::arg("preset") = "fig2", py::arg("overrides") = py::dict());
  m.def(
      "sweep_point",
      [](double beta, const std::string& backend, const py::dict& overrides) {
        const RunConfig c = config_from("beta-sweep", overrides);
        const SweepRow r = backend == "fd" ? sweep_point_fd(c, beta) : sweep_point_gaussian(c, beta);
        return py::make_tuple(r.tau_qsl_w, r.mean_speed, r.final_distance);
      },
      py::arg("beta"), py::arg("backend") = "gaussian", py::arg("overrides") = py::dict());
}
