// Python bindings: JSON-spec model construction plus the main evaluators.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qweyl/model_spec.hpp"
#include "qweyl/report.hpp"

namespace py = pybind11;
using namespace qweyl;

PYBIND11_MODULE(_qweyl, mod) {
  mod.doc() = "Weyl coefficients of 2x2 canonical systems with certified error bounds";

  py::class_<HamiltonianModel>(mod, "Model")
      .def_readonly("name", &HamiltonianModel::name)
      .def_readonly("a", &HamiltonianModel::a)
      .def_readonly("b", &HamiltonianModel::b);

  mod.def("model_from_json",
          [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); },
          py::arg("text"), "Build a Hamiltonian model from a JSON spec string.");
  mod.def("model_from_file", &model_from_file, py::arg("path"));

  mod.def("eval_q",
          [](const HamiltonianModel& m, cplx z, double tol_abs, double tol_rel, double eta) {
            QResult q = eval_q(m, z, tol_abs, tol_rel, eta);
            return py::make_tuple(q.q, q.error_radius);
          },
          py::arg("model"), py::arg("z"), py::arg("tol_abs") = 0.0,
          py::arg("tol_rel") = 1e-8, py::arg("eta") = 2.0,
          "Weyl coefficient q_H(z) and its certified error radius.");

  mod.def("envelopes",
          [](const HamiltonianModel& m, double r, double eta) {
            Envelopes e = envelopes(m, r, eta);
            return py::make_tuple(e.A, e.L, e.t_ring);
          },
          py::arg("model"), py::arg("r"), py::arg("eta") = 2.0,
          "Upper/lower envelopes (A, L) and the t-ring scale at r.");

  mod.def("estimate_at",
          [](const HamiltonianModel& m, double r, double eta) {
            EstimateRecord rec = estimate_at(m, r, eta);
            py::dict d;
            const auto header = estimate_csv_header();
            const auto row = estimate_csv_row(rec);
            for (size_t i = 0; i < header.size(); ++i) d[header[i].c_str()] = row[i];
            return d;
          },
          py::arg("model"), py::arg("r"), py::arg("eta") = 2.0,
          "Per-r estimate record: q, envelopes, scales, and dimensionless ratios.");

  mod.def("certified_band",
          [](const HamiltonianModel& m, const std::vector<double>& r_grid, double theta,
             double eta) {
            BandReport rep = certified_band(m, r_grid, theta, eta);
            return py::make_tuple(rep.pass, rep.min_margin);
          },
          py::arg("model"), py::arg("r_grid"), py::arg("theta"),
          py::arg("eta") = 0.13833,
          "Two-sided band verdict (pass, min normalized margin) along a ray.");

  mod.def("string_ratios",
          [](const std::string& text, const std::vector<double>& r_grid) {
            KreinString s = string_from_json(nlohmann::json::parse(text));
            A41Report rep = theorem_a41_check(s, r_grid);
            std::vector<std::pair<double, double>> out;
            for (const A41Record& rec : rep.records) out.emplace_back(rec.r, rec.ratio);
            return out;
          },
          py::arg("spec"), py::arg("r_grid"),
          "Krein-string ratios Im q_S(ir) * r * f(r) over an r-grid.");

  mod.def("sl_m",
          [](const std::string& text, cplx z) {
            SLProblem pr = sl_from_json(nlohmann::json::parse(text));
            return sl_m(sl_to_hamiltonian(pr), pr, z);
          },
          py::arg("spec"), py::arg("z"),
          "Titchmarsh-Weyl m-function of a Sturm-Liouville spec at z.");

  mod.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("per_decade"));
}
