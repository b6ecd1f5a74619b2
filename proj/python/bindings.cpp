#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "termflow/cli.hpp"
#include "termflow/dsl.hpp"
#include "termflow/error.hpp"
#include "termflow/flownet.hpp"
#include "termflow/normalize.hpp"
#include "termflow/oracle.hpp"
#include "termflow/report.hpp"

namespace py = pybind11;
using namespace termflow;

namespace {

// Results cross the boundary as JSON text; the Python package decodes them.
SearchOptions options(std::uint64_t budget, unsigned jobs) {
  SearchOptions o;
  o.budget = SearchBudget::from_environment();
  if (budget) o.budget.max_interpretations = budget;
  o.jobs = jobs;
  return o;
}

std::string exponent(const std::string& text, bool certificate) {
  const auto spec = parse_dispersion(text);
  const auto net = build_network(build_dag(spec));
  return to_json(max_flow(net), net, certificate).dump();
}

std::string threshold(const std::string& text, std::size_t d) {
  const auto r = decide_threshold(parse_dispersion(text), d);
  return Json{{"answer", r.yes ? "yes" : "no"}, {"d", r.d}, {"exponent", r.certificate.exponent}}.dump();
}

std::string dispersion(const std::string& text, Value n, std::uint64_t budget, unsigned jobs) {
  return to_json(brute_dispersion(parse_dispersion(text), n, options(budget, jobs))).dump();
}

std::string max_solutions(const std::string& text, Value n, std::uint64_t budget, unsigned jobs) {
  return to_json(brute_max_solutions(parse_system(text), n, options(budget, jobs))).dump();
}

std::string perfect(const std::string& text, Value n, std::uint64_t budget, unsigned jobs) {
  return to_json(check_perfect_fixed(parse_dispersion(text), n, options(budget, jobs))).dump();
}

std::string guessing(const std::string& text, Value n, std::uint64_t budget, unsigned jobs) {
  const auto g = parse_graph(text);
  return to_json(brute_guessing(g, n, options(budget, jobs)), g).dump();
}

std::string normalize(const std::string& text) {
  const auto [normal, report] = pipeline(parse_system(text));
  return Json{{"normal_form", to_json(normal)}, {"pipeline", to_json(report)}}.dump();
}

py::tuple cli(const std::vector<std::string>& args) {
  const auto o = run_cli(args);
  return py::make_tuple(o.exit_code, o.out, o.err);
}

}  // namespace

PYBIND11_MODULE(_termflow, m) {
  m.doc() = "Native core of termflow";

  auto base = py::register_exception<Error>(m, "TermflowError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<WellFormednessError>(m, "WellFormednessError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<EvalError>(m, "EvalError", base.ptr());

  m.attr("version") = kToolVersion;
  m.def("exponent", &exponent, py::arg("text"), py::arg("certificate") = false);
  m.def("threshold", &threshold, py::arg("text"), py::arg("d"));
  m.def("dispersion", &dispersion, py::arg("text"), py::arg("n"), py::arg("budget") = 0,
        py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("max_solutions", &max_solutions, py::arg("text"), py::arg("n"), py::arg("budget") = 0,
        py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("perfect", &perfect, py::arg("text"), py::arg("n"), py::arg("budget") = 0, py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("guessing", &guessing, py::arg("text"), py::arg("n"), py::arg("budget") = 0, py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("normalize", &normalize, py::arg("text"));
  m.def("run_cli", &cli, py::arg("args"));
}
