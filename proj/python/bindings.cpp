#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vorwave/audit.hpp"
#include "vorwave/config.hpp"
#include "vorwave/errors.hpp"
#include "vorwave/fields.hpp"
#include "vorwave/gerstner.hpp"
#include "vorwave/laminar.hpp"
#include "vorwave/strip_solver.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace vorwave;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

// node arrays come back shaped (N1+1, N2+1)
py::array_t<double> as_grid(const std::vector<double>& v, int rows, int cols) {
  py::array_t<double> a({rows, cols});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::dict point_dict(const BranchPoint& p) {
  const auto& gr = p.field.grid;
  return py::dict("Q"_a = p.Q, "amplitude"_a = p.amplitude, "step"_a = p.step,
                  "newton_iterations"_a = p.newton_iterations, "max_u"_a = p.max_u,
                  "trough_value"_a = p.trough_value, "h"_a = as_grid(p.field.h, gr.Nq + 1, gr.Np + 1));
}

py::object report_dict(const AuditReport& r) {
  return py::module_::import("json").attr("loads")(report_json(r, -1));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steady periodic water waves with vorticity: laminar flows, bifurcation, continuation and audits";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<StagnationError>(m, "StagnationError", base.ptr());
  py::register_exception<NoConvergenceError>(m, "NoConvergenceError", numeric.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

  py::class_<VorticityFunction>(m, "VorticityFunction")
      .def_static("constant", &VorticityFunction::constant, "gamma"_a, "m"_a = 1.0)
      .def_static("polynomial", &VorticityFunction::polynomial, "coeffs"_a, "m"_a = 1.0)
      .def_static("tabulated", &VorticityFunction::tabulated, "samples"_a, "m"_a = 1.0)
      .def("gamma", &VorticityFunction::gamma, "psi"_a, "order"_a = 0)
      .def("Gamma", &VorticityFunction::Gamma, "s"_a)
      .def_property_readonly("m", &VorticityFunction::m)
      .def_property_readonly("lambda_threshold", &VorticityFunction::lambda_threshold)
      .def("__repr__", &VorticityFunction::describe);

  m.def("lambda_c", &lambda_c, "vf"_a, "g"_a = 9.81);
  m.def("q_tilde", &q_tilde, "vf"_a, "lam"_a, "g"_a = 9.81);
  m.def("q_tilde_prime", &q_tilde_prime, "vf"_a, "lam"_a, "g"_a = 9.81);
  m.def(
      "gamma_criteria",
      [](const VorticityFunction& vf, double g, double L) {
        const auto a = gamma_small_criterion(vf, g, L);
        const auto b = gamma_smallest_criterion(vf, g, L, vf.m());
        py::dict small("lhs"_a = a.lhs, "rhs"_a = a.rhs, "status"_a = to_string(a.status));
        py::dict smallest("lhs"_a = b.lhs, "status"_a = to_string(b.status), "reason"_a = b.reason);
        return py::dict("gammasmall"_a = small, "gammasmallest"_a = smallest);
      },
      "vf"_a, "g"_a = 9.81, "L"_a = 3.141592653589793);

  py::class_<LaminarFlow>(m, "LaminarFlow")
      .def(py::init<VorticityFunction, double, double>(), "vf"_a, "lam"_a, "g"_a = 9.81)
      .def_property_readonly("depth", &LaminarFlow::depth)
      .def_property_readonly("head", &LaminarFlow::head)
      .def("u0", &LaminarFlow::u0, "s"_a)
      .def("heights", &LaminarFlow::heights, "s"_a);

  py::class_<StripGrid>(m, "StripGrid")
      .def(py::init<int, int, double, double, double>(), "Nq"_a = 64, "Np"_a = 48, "L"_a = 3.141592653589793,
           "m"_a = 1.0, "stretch"_a = 0.0)
      .def_readonly("Nq", &StripGrid::Nq)
      .def_readonly("Np", &StripGrid::Np)
      .def_readonly("L", &StripGrid::L)
      .def_readonly("m", &StripGrid::m)
      .def("p", &StripGrid::p)
      .def("q", &StripGrid::q);

  py::class_<HeightField>(m, "HeightField")
      .def_readonly("grid", &HeightField::grid)
      .def_readonly("Q", &HeightField::Q)
      .def_property_readonly("h", [](const HeightField& hf) { return as_grid(hf.h, hf.grid.Nq + 1, hf.grid.Np + 1); })
      .def("amplitude", &HeightField::amplitude)
      .def("residual", [](const HeightField& hf) { return as_array(residual(hf)); });

  m.def("discrete_laminar", &discrete_laminar, "grid"_a, "vf"_a, "g"_a, "lam"_a);

  m.def(
      "find_bifurcation",
      [](const StripGrid& grid, const VorticityFunction& vf, double g) {
        const Bifurcation b = find_bifurcation(grid, vf, g);
        return py::dict("lambda_star"_a = b.lambda_star, "lambda_c"_a = b.lambda_c, "Q_star"_a = b.laminar.Q,
                        "mode"_a = as_array(b.mode));
      },
      "grid"_a, "vf"_a, "g"_a = 9.81);

  m.def(
      "continue_branch",
      [](const StripGrid& grid, const VorticityFunction& vf, double g, int steps, double ds, double eps_stag,
         double trough_margin) {
        ContinuationOptions o;
        o.steps = steps;
        o.ds0 = o.ds_max = ds;
        o.eps_stag = eps_stag;
        o.trough_margin = trough_margin;
        Branch br;
        {
          py::gil_scoped_release release;
          br = continue_branch(grid, vf, g, o);
        }
        py::list pts;
        std::vector<HeightField> fields;
        for (const auto& p : br.points) {
          pts.append(point_dict(p));
          fields.push_back(p.field);
        }
        return py::dict("lambda_star"_a = br.lambda_star, "lambda_c"_a = br.lambda_c, "eps_stag"_a = br.eps_stag,
                        "stop_reason"_a = br.stop_reason, "points"_a = pts, "fields"_a = fields);
      },
      "grid"_a, "vf"_a, "g"_a = 9.81, "steps"_a = 25, "ds"_a = 0.005,
      "eps_stag"_a = std::numeric_limits<double>::quiet_NaN(), "trough_margin"_a = 0.0);

  py::class_<WaveField>(m, "WaveField")
      .def_readonly("g", &WaveField::g)
      .def_readonly("Q", &WaveField::Q)
      .def_readonly("d", &WaveField::d)
      .def_readonly("L", &WaveField::L)
      .def_readonly("has_bed", &WaveField::has_bed)
      .def_property_readonly("shape", [](const WaveField& w) { return py::make_tuple(w.grid.N1() + 1, w.grid.N2() + 1); })
#define VORWAVE_NODE_ARRAY(name) \
  .def_property_readonly(#name, [](const WaveField& w) { return as_grid(w.name, w.grid.N1() + 1, w.grid.N2() + 1); })
      VORWAVE_NODE_ARRAY(x) VORWAVE_NODE_ARRAY(y) VORWAVE_NODE_ARRAY(u) VORWAVE_NODE_ARRAY(v) VORWAVE_NODE_ARRAY(P)
      VORWAVE_NODE_ARRAY(psi) VORWAVE_NODE_ARRAY(omega) VORWAVE_NODE_ARRAY(ux) VORWAVE_NODE_ARRAY(uy)
      VORWAVE_NODE_ARRAY(vx) VORWAVE_NODE_ARRAY(vy) VORWAVE_NODE_ARRAY(uxx) VORWAVE_NODE_ARRAY(uxy)
#undef VORWAVE_NODE_ARRAY
      .def_property_readonly("eta", [](const WaveField& w) { return as_array(w.eta); })
      .def("write_csv", &write_field_csv, "path"_a, "with_vorticity_columns"_a = false)
      .def("consistency", [](const WaveField& w) {
        const FieldConsistency c = field_consistency(w);
        return py::dict("euler"_a = c.euler(), "divergence"_a = c.divergence, "psi_y"_a = c.psi_y,
                        "kinematic"_a = c.kinematic, "dynamic"_a = c.dynamic, "mean_eta"_a = c.mean_eta,
                        "vorticity"_a = c.vorticity);
      });

  m.def("reconstruct", &reconstruct, "hf"_a);

  m.def(
      "audit",
      [](const WaveField& wf, const VorticityFunction* vf, double lambda_c) {
        AuditOptions o;
        o.lambda_c = lambda_c;
        return report_dict(audit_wave(wf, vf, o));
      },
      "wf"_a, "vf"_a = nullptr, "lambda_c"_a = std::numeric_limits<double>::quiet_NaN());

  py::class_<GerstnerWave>(m, "GerstnerWave")
      .def_static("from_steepness", &GerstnerWave::from_steepness, "k"_a, "eps"_a, "g"_a = 9.81)
      .def_property_readonly("k", &GerstnerWave::k)
      .def_property_readonly("b0", &GerstnerWave::b0)
      .def_property_readonly("speed", &GerstnerWave::speed)
      .def_property_readonly("steepness", &GerstnerWave::steepness)
      .def("field", [](const GerstnerWave& gw, int n1, int n2) { return gerstner_field(gw, n1, n2); }, "n1"_a = 128,
           "n2"_a = 96)
      .def("max_slope",
           [](const GerstnerWave& gw) {
             const auto s = gerstner_max_slope(gw);
             return py::dict("angle_deg"_a = s.angle_deg, "a"_a = s.a);
           })
      .def("euler_residual", &gerstner_euler_residual, "a"_a, "b"_a, "step"_a = 1e-5);

  m.def("parse_config", [](const std::string& text) { return config_json(parse_config(text)); }, "text"_a,
        "Validate a run configuration and return it in canonical form.");
}
