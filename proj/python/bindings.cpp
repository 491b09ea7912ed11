#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polywave/commands.hpp"
#include "polywave/surrogate_io.hpp"
#include "polywave/utd.hpp"

namespace py = pybind11;
using namespace polywave;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Time-domain wave surrogates for polygonal scenes";

  py::register_exception<SceneError>(m, "SceneError", PyExc_ValueError);

  m.def("fresnel_transition", &fresnel_transition, py::arg("x"));
  m.def("wedge_index", &wedge_index, py::arg("alpha"));
  m.def(
      "diffraction_coefficient",
      [](double alpha, double theta, bool dirichlet, double mu_bar, double phi) {
        const WedgeLocalFrame f = make_wedge_frame(alpha, theta, dirichlet ? -1 : 1);
        return diffraction_coefficient(f, DiffractionParams{mu_bar, 1e-7}, phi);
      },
      py::arg("alpha"), py::arg("theta"), py::arg("dirichlet") = false, py::arg("mu_bar") = 10.0, py::arg("phi"));
  m.def(
      "shadow_boundaries",
      [](double alpha, double theta) {
        std::vector<std::pair<double, std::string>> out;
        for (const ShadowBoundary& b : shadow_boundaries(make_wedge_frame(alpha, theta, 1))) {
          out.emplace_back(b.phi, b.kind == ShadowKind::Incident ? "incident" : "reflected");
        }
        return out;
      },
      py::arg("alpha"), py::arg("theta"));

  py::class_<Scene>(m, "Scene")
      .def_readonly("name", &Scene::name)
      .def_property_readonly("T", [](const Scene& s) { return s.run.T; })
      .def_property_readonly("R", [](const Scene& s) { return s.source.R; })
      .def_property_readonly("n_edges", [](const Scene& s) { return s.domain->n_edges(); })
      .def("contains", [](const Scene& s, double x1, double x2) { return s.domain->contains({x1, x2}); });
  m.def("load_scene", &load_scene, py::arg("path"));
  m.def("parse_scene", &parse_scene, py::arg("text"), py::arg("origin") = "<string>");

  py::class_<Surrogate>(m, "Surrogate")
      .def_property_readonly("size", &Surrogate::size)
      .def_property_readonly("keys",
                             [](const Surrogate& s) {
                               std::vector<std::string> k;
                               for (const FieldComponent& c : s.components()) k.push_back(c.key);
                               return k;
                             })
      .def_property_readonly("birth_times",
                             [](const Surrogate& s) {
                               std::vector<double> b;
                               for (const FieldComponent& c : s.components()) b.push_back(c.birth_time);
                               return b;
                             })
      .def("evaluate", [](const Surrogate& s, double x1, double x2, double t) { return s.evaluate({x1, x2}, t); })
      .def("evaluate_go",
           [](const Surrogate& s, double x1, double x2, double t) { return s.evaluate_go({x1, x2}, t); })
      .def("error_indicator",
           [](const Surrogate& s, double x1, double x2, double t) { return s.error_indicator({x1, x2}, t); })
      .def("with_mu_bar", &Surrogate::with_mu_bar, py::arg("mu_bar"))
      .def("report", &component_report);

  m.def("build", &build_from_scene, py::arg("scene"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "save_surrogate", [](const std::string& path, const Surrogate& s, const Scene& sc) { save_surrogate(path, s, sc.source); },
      py::arg("path"), py::arg("surrogate"), py::arg("scene"));
  m.def("load_surrogate", [](const std::string& path) { return load_surrogate(path).surrogate; }, py::arg("path"));
  m.def(
      "compare",
      [](const Scene& sc, const Surrogate& s, const std::vector<double>& times) {
        py::gil_scoped_release release;
        return compare_errors(s, run_reference(sc, times), sc.run.quad_h);
      },
      py::arg("scene"), py::arg("surrogate"), py::arg("times"));
}
