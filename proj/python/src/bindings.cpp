#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "evcharge/config.hpp"
#include "evcharge/report.hpp"

namespace py = pybind11;
using namespace evcharge;

namespace {

FeasibleSet make_set(Profile low, Profile up, std::optional<double> budget) {
  FeasibleSet s{std::move(low), std::move(up), budget.has_value(), budget.value_or(0.0)};
  validate(s);
  return s;
}

py::dict manifest_dict(const RunManifest& m) {
  py::list files;
  for (const auto& f : m.files) {
    files.append(py::dict(py::arg("name") = f.name, py::arg("digest") = f.digest,
                          py::arg("bytes") = f.bytes));
  }
  return py::dict(py::arg("command") = m.command, py::arg("out_dir") = m.out_dir,
                  py::arg("seed") = m.seed, py::arg("files") = files,
                  py::arg("checks_passed") = m.checks_passed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online EV charging with optimistic mirror descent";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<InvalidSet>(m, "InvalidSet", error.ptr());
  py::register_exception<LengthMismatch>(m, "LengthMismatch", error.ptr());
  py::register_exception<UnknownPreset>(m, "UnknownPreset", error.ptr());

  py::class_<FeasibleSet>(m, "FeasibleSet")
      .def(py::init(&make_set), py::arg("low"), py::arg("up"),
           py::arg("budget") = std::nullopt)
      .def_static("window", &FeasibleSet::window, py::arg("slots"), py::arg("first_slot"),
                  py::arg("last_slot"), py::arg("rate_max"), py::arg("budget") = std::nullopt)
      .def_readonly("low", &FeasibleSet::low)
      .def_readonly("up", &FeasibleSet::up)
      .def_property_readonly("budget", [](const FeasibleSet& s) -> std::optional<double> {
        if (!s.budget_active) return std::nullopt;
        return s.budget;
      })
      .def("contains", [](const FeasibleSet& s, const Profile& x, double tol) {
        return contains(x, s, tol);
      }, py::arg("x"), py::arg("tol") = 1e-9);

  m.def("project", [](const Profile& h, const FeasibleSet& s) { return project(h, s); },
        py::arg("h"), py::arg("set"));
  m.def("budget_multiplier",
        [](const Profile& h, const FeasibleSet& s) { return budget_multiplier(h, s); },
        py::arg("h"), py::arg("set"));

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readonly("slots", &ScenarioConfig::slots)
      .def_readwrite("days", &ScenarioConfig::days)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_property_readonly("customers",
                             [](const ScenarioConfig& c) { return c.fleet.size(); })
      .def("to_text", &write_config);

  m.def("parse_config", [](const std::string& text) { return parse_config(text); },
        py::arg("text"));
  m.def("load_config", [](const std::filesystem::path& p) { return load_config(p); },
        py::arg("path"));
  m.def("preset_dir", [] { return std::string(EVCHARGE_PRESET_DIR); });

  py::class_<BoundCheck>(m, "BoundCheck")
      .def_readonly("name", &BoundCheck::name)
      .def_readonly("applicable", &BoundCheck::applicable)
      .def_readonly("passed", &BoundCheck::passed)
      .def_readonly("worst_margin", &BoundCheck::worst_margin)
      .def_readonly("worst_day", &BoundCheck::worst_day);

  py::class_<Evaluation>(m, "Evaluation")
      .def_property_readonly("horizon", [](const Evaluation& e) { return e.report.horizon; })
      .def_property_readonly("company_regret",
                             [](const Evaluation& e) { return e.report.company_regret; })
      .def_property_readonly("company_bound", [](const Evaluation& e) {
        return e.report.applicable_company_bound();
      })
      .def_property_readonly("customer_regret",
                             [](const Evaluation& e) { return e.report.customer_regret; })
      .def_property_readonly("tracking_regret",
                             [](const Evaluation& e) { return e.report.tracking; })
      .def_property_readonly("tracking_bound",
                             [](const Evaluation& e) { return e.report.tracking_bound; })
      .def_property_readonly("checks", [](const Evaluation& e) { return e.report.checks; })
      .def("total_load",
           [](const Evaluation& e, int day) { return total_load(e.trace, day); },
           py::arg("day"))
      .def("profiles",
           [](const Evaluation& e, int day) { return e.trace.day(day).profiles; },
           py::arg("day"))
      .def_property_readonly("x_star", [](const Evaluation& e) { return e.comparators.x_star; });

  m.def("evaluate", &evaluate, py::arg("config"), py::call_guard<py::gil_scoped_release>());

  m.def("run", [](const ScenarioConfig& c, const std::filesystem::path& out) {
    std::ostringstream log;
    const RunManifest man = run_command(c, "<python>", out, log);
    py::dict d = manifest_dict(man);
    d["log"] = log.str();
    return d;
  }, py::arg("config"), py::arg("out_dir"));

  m.def("figure_presets", &figure_presets);
}
