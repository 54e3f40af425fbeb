#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <variant>
#include <vector>

#include "gcalc/config.hpp"
#include "gcalc/errors.hpp"
#include "gcalc/gexpectation.hpp"
#include "gcalc/gheat.hpp"
#include "gcalc/gnormal.hpp"
#include "gcalc/manifest.hpp"
#include "gcalc/risk.hpp"
#include "gcalc/suites.hpp"
#include "gcalc/sublinear.hpp"
#include "gcalc/templates.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// Structured arguments cross the boundary as JSON text; the Python layer does the dumps/loads.
json parse(const std::string& text, const char* field) {
  try {
    return gcalc::Config::parse_document(text, field);
  } catch (const json::exception& e) {
    throw gcalc::ConfigError(field, e.what());
  }
}

gcalc::Config config_from(const std::string& text) {
  return text.empty() ? gcalc::Config{} : gcalc::Config::from_json(parse(text, "config"));
}

using PayoffArg = std::variant<std::string, std::function<double(double)>>;

gcalc::Payoff1D payoff_from(const PayoffArg& arg) {
  if (const auto* text = std::get_if<std::string>(&arg)) {
    return gcalc::compile_template_1d(parse(*text, "payoff"));
  }
  return std::get<std::function<double(double)>>(arg);
}

}  // namespace

PYBIND11_MODULE(_gcalc, m) {
  m.doc() = "G-expectation calculus engine";
  m.attr("__version__") = gcalc::kToolVersion;

  auto base = py::register_exception<gcalc::Error>(m, "GcalcError", PyExc_RuntimeError);
  py::register_exception<gcalc::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<gcalc::BudgetError>(m, "BudgetError", base.ptr());
  py::register_exception<gcalc::CflError>(m, "CflError", base.ptr());
  py::register_exception<gcalc::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<gcalc::DimensionError>(m, "DimensionError", base.ptr());

  m.def("default_config", [] { return gcalc::Config{}.to_json().dump(); });

  m.def("normalize_config", [](const std::string& text) { return config_from(text).to_json().dump(); },
        py::arg("config_json"));

  m.def(
      "g_value",
      [](const std::string& gamma, const std::vector<std::vector<double>>& a) {
        return gcalc::g_value(gcalc::UncertaintySet::from_json(parse(gamma, "gamma")),
                              gcalc::SymMatrix::from_rows(a));
      },
      py::arg("gamma_json"), py::arg("a"));

  m.def(
      "moment_abs",
      [](double sigma_plus, double sigma_minus, double t, int n) {
        gcalc::GNormalParams p{sigma_plus, sigma_minus, t};
        p.validate();
        return gcalc::moment_abs(p, n);
      },
      py::arg("sigma_plus"), py::arg("sigma_minus"), py::arg("t"), py::arg("n"));

  m.def(
      "moment_even_signed",
      [](double sigma_plus, double sigma_minus, double t, int n, int sign) {
        gcalc::GNormalParams p{sigma_plus, sigma_minus, t};
        p.validate();
        return gcalc::moment_even_signed(p, n, sign);
      },
      py::arg("sigma_plus"), py::arg("sigma_minus"), py::arg("t"), py::arg("n"), py::arg("sign"));

  m.def(
      "evaluate",
      [](const std::string& gamma, const std::vector<double>& direction, const PayoffArg& payoff,
         double t, const std::vector<double>& x, const std::string& solver) {
        const auto g = gcalc::UncertaintySet::from_json(parse(gamma, "gamma"));
        const auto cfg = solver.empty() ? gcalc::SolverConfig{}
                                        : gcalc::SolverConfig::from_json(parse(solver, "pde"));
        const auto fn = payoff_from(payoff);
        // The PDE loop calls back into Python for callables, so the GIL stays held.
        return gcalc::evaluate_pt(g, gcalc::Direction(direction), fn, t, x, cfg);
      },
      py::arg("gamma_json"), py::arg("direction"), py::arg("payoff"), py::arg("t"), py::arg("x"),
      py::arg("solver_json") = "");

  m.def(
      "expect_cylinder",
      [](const std::string& gamma, const std::vector<double>& times, const std::vector<double>& direction,
         const std::string& phi, const std::string& config) {
        gcalc::CylinderFunctional x;
        x.times = times;
        x.direction = gcalc::Direction(direction);
        x.phi = gcalc::compile_template(parse(phi, "phi"), "phi").fn;
        const auto cfg = config_from(config);
        return gcalc::expect(x, gcalc::UncertaintySet::from_json(parse(gamma, "gamma")), cfg.expectation());
      },
      py::arg("gamma_json"), py::arg("times"), py::arg("direction"), py::arg("phi_json"),
      py::arg("config_json") = "");

  m.def("check_ids", [](const std::string& suite) { return gcalc::suite_check_ids(suite); },
        py::arg("suite") = "acceptance");

  m.def(
      "run_check",
      [](const std::string& id, const std::string& config) {
        const auto cfg = config_from(config);
        py::gil_scoped_release release;
        return gcalc::run_check(id, cfg).to_json().dump();
      },
      py::arg("id"), py::arg("config_json") = "");

  m.def(
      "run_suite",
      [](const std::string& suite, const std::string& config) {
        const auto cfg = config_from(config);
        py::gil_scoped_release release;
        return gcalc::run_suite(suite, cfg).to_json().dump();
      },
      py::arg("suite"), py::arg("config_json") = "");

  m.def("sha256_hex", [](const std::string& data) { return gcalc::sha256_hex(data); }, py::arg("data"));
}
