#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dmod/fixture.hpp"
#include "dmod/heun.hpp"
#include "dmod/realize.hpp"

namespace py = pybind11;
using namespace dmod;

// Results cross the boundary as JSON text; the Python layer turns rationals into Fractions.
namespace {

std::string solve(const std::string& op, const std::string& divisor, const std::string& order,
                  const std::string& seed, unsigned precision, const std::string& params, const std::string& pair) {
  SolveRequest req{op, parse_bindings(params), divisor, order, pair, seed, precision};
  return solve_result_to_json(newton_iterate(build_config(req))).dump();
}

std::string indicial(const std::string& op, const std::string& params) {
  IndicialData ind = indicial_polynomial(parse_operator(op, parse_bindings(params)));
  Json roots = Json::array();
  for (const auto& r : ind.rational_roots) roots.push_back(rational_to_json(r));
  return Json{{"polynomial", to_string(ind.polynomial)}, {"rational_roots", roots}}.dump();
}

std::string heun(const std::string& variant, const std::string& a, const std::string& alpha, const std::string& beta,
                 const std::string& gamma, const std::string& delta, const std::string& epsilon, unsigned digits) {
  HeunParams p{parse_rational(a),     parse_rational(alpha), parse_rational(beta),    parse_rational(gamma),
               parse_rational(delta), parse_rational(epsilon), parse_heun_variant(variant)};
  PrecisionScope scope(digits);
  HeunEigenReport rep = heun_eigen(p, std::nullopt, digits);
  Json matrix = Json::array(), eig = Json::array();
  for (const auto& row : rep.matrix) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    matrix.push_back(r);
  }
  for (const auto& c : rep.eigen) eig.push_back(eigen_to_json(c.solution, digits));
  return Json{{"matrix", matrix}, {"charpoly", to_string(rep.charpoly)}, {"eigen", eig}, {"verified", rep.verified}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_dmod, m) {
  m.doc() = "Exact series solutions of linear operators";
  py::register_exception<Error>(m, "DmodError", PyExc_ValueError);

  m.def("parse_operator", [](const std::string& text, const std::string& params) {
    return parse_operator(text, parse_bindings(params)).str();
  }, py::arg("text"), py::arg("params") = "");
  m.def("solve", &solve, py::arg("operator"), py::arg("divisor") = "d", py::arg("order") = "standard",
        py::arg("seed") = "1", py::arg("precision") = 16, py::arg("params") = "", py::arg("pair") = "xd");
  m.def("indicial", &indicial, py::arg("operator"), py::arg("params") = "");
  m.def("heun_eigen", &heun, py::arg("variant"), py::arg("a"), py::arg("alpha"), py::arg("beta"),
        py::arg("gamma"), py::arg("delta"), py::arg("epsilon"), py::arg("digits") = 50);
  m.def("difference_bessel", [](unsigned n, long x) { return to_string(difference_bessel(n, x)); });
  m.def("run_fixture", [](const std::string& path) { return report_to_json(run_fixture(load_fixture(path))).dump(); });
}
