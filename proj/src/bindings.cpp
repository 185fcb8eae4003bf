#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "peg/json_io.hpp"
#include "peg/solver.hpp"
#include "peg/svg.hpp"
#include "peg/topology.hpp"

namespace py = pybind11;
using namespace peg;

namespace {

SolveConfig config_from_kwargs(int grid, double newton_tol, double cluster_radius,
                               double diag_exclusion, int workers) {
  SolveConfig cfg;
  cfg.grid_per_axis = grid;
  cfg.newton_tol = newton_tol;
  cfg.cluster_radius = cluster_radius;
  cfg.diag_exclusion = diag_exclusion;
  cfg.workers = workers;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "inscribed rectangle / cyclic quadrilateral solver core";

  py::register_exception<EmbeddingError>(m, "EmbeddingError");
  py::register_exception<OrbitIntegrityError>(m, "OrbitIntegrityError");
  py::register_exception<LedgerError>(m, "LedgerError");

  py::class_<FourierCurve>(m, "FourierCurve")
      .def(py::init<int, std::vector<Complex>>(), py::arg("max_mode"), py::arg("coeffs"))
      .def("eval", &FourierCurve::eval, py::arg("t"))
      .def("deriv", &FourierCurve::deriv, py::arg("t"), py::arg("order") = 1)
      .def("diameter", &FourierCurve::diameter)
      .def("fingerprint", &FourierCurve::fingerprint)
      .def_property_readonly("max_mode", &FourierCurve::max_mode)
      .def_property_readonly("coeffs", &FourierCurve::coeffs)
      .def("to_json", [](const FourierCurve& c) { return curve_to_json(c).dump(); });

  m.def("make_ellipse", &make_ellipse, py::arg("a"), py::arg("b"));
  m.def("perturb", &perturb, py::arg("curve"), py::arg("amplitude"), py::arg("max_mode"),
        py::arg("seed"));
  m.def("curve_from_json", [](const std::string& text) {
    return curve_from_json(Json::parse(text));
  });

  m.def(
      "check_embedded",
      [](const FourierCurve& curve, int n_samples) {
        const EmbeddingVerdict v = check_embedded(curve, n_samples);
        py::dict d;
        d["embedded"] = v.embedded;
        d["samples_used"] = v.samples_used;
        if (v.worst_pair)
          d["worst_pair"] = py::make_tuple(v.worst_pair->t1, v.worst_pair->t2,
                                           v.worst_pair->distance);
        return d;
      },
      py::arg("curve"), py::arg("n_samples") = 512);

  m.def(
      "residual_rect",
      [](const FourierCurve& curve, double phi, double t1, double t2, double t3, double t4) {
        const ResidualValue r =
            residual_rect(curve, phi, TorusQuadruple::wrapped(t1, t2, t3, t4));
        return py::make_tuple(r.components, r.norm);
      },
      py::arg("curve"), py::arg("phi"), py::arg("t1"), py::arg("t2"), py::arg("t3"),
      py::arg("t4"));

  m.def(
      "residual_quad",
      [](const FourierCurve& curve, double s, double t, double phi, double t1, double t2,
         double t3, double t4) {
        const ResidualValue r =
            residual_quad(curve, QuadData{s, t, phi}, TorusQuadruple::wrapped(t1, t2, t3, t4));
        return py::make_tuple(r.components, r.norm);
      },
      py::arg("curve"), py::arg("s"), py::arg("t"), py::arg("phi"), py::arg("t1"),
      py::arg("t2"), py::arg("t3"), py::arg("t4"));

  // Reports cross the boundary as JSON text; the python wrapper decodes.
  m.def(
      "solve_rect",
      [](const FourierCurve& curve, double phi, bool right_angle, int grid, double newton_tol,
         double cluster_radius, double diag_exclusion, int workers) {
        const Problem problem = RectangleProblem{right_angle ? 0.0 : phi, right_angle};
        validate(problem);
        const SolveReport report =
            solve(curve, problem,
                  config_from_kwargs(grid, newton_tol, cluster_radius, diag_exclusion, workers));
        return report_to_json(report).dump();
      },
      py::arg("curve"), py::arg("phi"), py::arg("right_angle") = false, py::arg("grid") = 24,
      py::arg("newton_tol") = 1e-11, py::arg("cluster_radius") = 1e-4,
      py::arg("diag_exclusion") = 0.05, py::arg("workers") = 0);

  m.def(
      "solve_quad",
      [](const FourierCurve& curve, double s, double t, double phi, int grid, double newton_tol,
         double cluster_radius, double diag_exclusion, int workers) {
        const Problem problem = QuadProblem{QuadData{s, t, phi}};
        validate(problem);
        const SolveReport report =
            solve(curve, problem,
                  config_from_kwargs(grid, newton_tol, cluster_radius, diag_exclusion, workers));
        return report_to_json(report).dump();
      },
      py::arg("curve"), py::arg("s"), py::arg("t"), py::arg("phi"), py::arg("grid") = 24,
      py::arg("newton_tol") = 1e-11, py::arg("cluster_radius") = 1e-4,
      py::arg("diag_exclusion") = 0.05, py::arg("workers") = 0);

  m.def(
      "topology_check",
      [](const std::string& report_text, int global_sign) {
        const SolveReport report = report_from_json(Json::parse(report_text));
        const CleanFormulaVerdict clean = clean_formula_check(report);
        const EulerLedger euler = euler_bookkeeping(report, global_sign);
        return topology_to_json(clean, euler).dump();
      },
      py::arg("report_json"), py::arg("global_sign") = 1);

  m.def(
      "render_svg",
      [](const FourierCurve& curve, const std::string& report_text) {
        return render_svg(curve, report_from_json(Json::parse(report_text)));
      },
      py::arg("curve"), py::arg("report_json"));
}
