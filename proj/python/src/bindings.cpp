#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "circlelab/arcs.hpp"
#include "circlelab/coefficients.hpp"
#include "circlelab/error.hpp"
#include "circlelab/expsums.hpp"
#include "circlelab/harness.hpp"
#include "circlelab/theorem.hpp"
#include "circlelab/voronoi.hpp"
#include "circlelab/weight.hpp"

namespace py = pybind11;
using namespace circlelab;

namespace {

py::dict exponent_dict(const theorem::ExponentReport& rep) {
  py::dict d;
  d["theta0"] = theorem::to_string(rep.theta0);
  d["trivial"] = theorem::to_string(rep.trivial_exp);
  d["main"] = theorem::to_string(rep.main_exp);
  d["remainder"] = theorem::to_string(rep.remainder_exp);
  d["case"] = theorem::to_string(rep.case_tag);
  d["final"] = theorem::to_string(rep.final_exp);
  d["nontrivial"] = rep.nontrivial;
  return d;
}

py::dict scan_dict(const expsums::ScanSummary& s) {
  py::dict d;
  d["max_ratio"] = s.max_ratio;
  d["violations"] = s.violations;
  d["max_imag"] = s.max_imag;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of circlelab";

  static py::exception<Error> error(m, "CirclelabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<coeffs::CoefficientTable>(m, "CoefficientTable")
      .def_property_readonly("limit", &coeffs::CoefficientTable::limit)
      .def_property_readonly("backend", [](const coeffs::CoefficientTable& t) { return coeffs::to_string(t.backend()); })
      .def("at", &coeffs::CoefficientTable::at, py::arg("n"))
      .def("__getitem__", &coeffs::CoefficientTable::at)
      .def("__len__", &coeffs::CoefficientTable::limit)
      .def("values", &coeffs::CoefficientTable::values)
      .def("absolute", &coeffs::CoefficientTable::absolute);

  m.def(
      "build_table",
      [](const std::string& backend, std::uint64_t n) { return coeffs::build_table(coeffs::backend_from_string(backend), n); },
      py::arg("backend"), py::arg("n"), py::call_guard<py::gil_scoped_release>(), "A(n,1) for 1 <= n <= N.");

  py::class_<weight::WeightFunction>(m, "WeightFunction")
      .def(py::init<double>(), py::arg("delta"))
      .def_property_readonly("delta", &weight::WeightFunction::delta)
      .def("__call__", &weight::WeightFunction::operator(), py::arg("x"))
      .def("mass", &weight::WeightFunction::mass);

  m.def(
      "weyl_sum", [](int r, double X, double alpha) { return expsums::weyl_sum({r, X, alpha}); }, py::arg("r"),
      py::arg("X"), py::arg("alpha"));
  m.def(
      "gauss_sum", [](int r, std::int64_t a, std::int64_t b, std::int64_t q) { return expsums::gauss_sum(r, a, b, q).value; },
      py::arg("r"), py::arg("a"), py::arg("b"), py::arg("q"));
  m.def(
      "kloosterman", [](std::int64_t a, std::int64_t b, std::int64_t c) { return expsums::kloosterman(a, b, c).value; },
      py::arg("a"), py::arg("b"), py::arg("c"));
  m.def("weil_envelope", &expsums::weil_envelope, py::arg("a"), py::arg("b"), py::arg("c"));
  m.def(
      "weil_scan", [](std::uint64_t c_max, unsigned workers) { return scan_dict(expsums::weil_scan(c_max, workers)); },
      py::arg("c_max"), py::arg("workers") = 1);
  m.def("psi_r", &expsums::psi_r, py::arg("r"), py::arg("beta"), py::arg("X"));

  m.def(
      "dirichlet_approx",
      [](double alpha, double Q) {
        const auto a = arcs::dirichlet_approx(alpha, Q);
        return py::make_tuple(a.a, a.q, a.beta);
      },
      py::arg("alpha"), py::arg("Q"));
  m.def(
      "classify",
      [](double alpha, double X, double theta) -> py::object {
        const auto c = arcs::ArcDecomposition(X, theta).classify(alpha);
        if (const auto* major = std::get_if<arcs::Major>(&c)) return py::make_tuple(major->a, major->q);
        return py::none();
      },
      py::arg("alpha"), py::arg("X"), py::arg("theta"), "(a, q) on a major arc, None on the minor arcs.");

  m.def(
      "evaluate_theorem",
      [](int r, int s, int ell, const std::string& delta) {
        return exponent_dict(theorem::evaluate_theorem({r, s, ell, theorem::parse_rational(delta)}));
      },
      py::arg("r"), py::arg("s"), py::arg("ell"), py::arg("delta"));

  m.def(
      "phi_transform",
      [](double x, double X, double beta, double delta, int sign, double langlands_t) {
        const voronoi::PhiSpec spec{weight::WeightFunction(delta), X, beta};
        return voronoi::phi_transform(x, spec, voronoi::LanglandsParams::tempered(langlands_t),
                                      sign >= 0 ? voronoi::Sign::Plus : voronoi::Sign::Minus)
            .value;
      },
      py::arg("x"), py::arg("X"), py::arg("beta"), py::arg("delta") = 2.0, py::arg("sign") = 1,
      py::arg("langlands_t") = 0.0);

  m.def(
      "brute_sum",
      [](int r, int s, int ell, double X, double Delta, const coeffs::CoefficientTable& table, unsigned workers) {
        return harness::brute_sum_S({r, s, ell}, X, Delta, table, workers);
      },
      py::arg("r"), py::arg("s"), py::arg("ell"), py::arg("X"), py::arg("Delta"), py::arg("table"),
      py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("hua_count", &harness::hua_count, py::arg("r"), py::arg("X"));
}
