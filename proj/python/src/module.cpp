#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ale/gh_space.hpp"
#include "ale/report.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

ale::Patch patch_named(const std::string& name) {
  if (name == "north") return ale::Patch::north;
  if (name == "south") return ale::Patch::south;
  throw ale::ConfigError("patch must be 'north' or 'south'");
}

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string verify(const std::string& suite, int k, double lambda, const std::map<std::string, double>& tolerance) {
  ale::GHConfig::canonical(k, lambda).validate();
  const ale::SuiteOptions options{k, lambda, tolerance};
  json suites = json::array();
  bool all_pass = true;
  for (const ale::SuiteResult& r : ale::run_suites(suite, options)) {
    all_pass = all_pass && r.passed();
    suites.push_back(ale::to_json(r));
  }
  return json{{"schema_version", 1}, {"k", k}, {"lambda", lambda}, {"suite", suite}, {"suites", suites}, {"pass", all_pass}}
      .dump();
}

std::string obstruct(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ale::SchemaError(std::string("$: invalid JSON: ") + e.what());
  }
  return ale::to_json(ale::compute_obstruction(ale::parse_obstruction_request(doc))).dump();
}

py::dict constants(int k, double lambda) {
  ale::ObstructionSetup setup;
  setup.k = k;
  setup.lambda = lambda;
  const ale::InstantonConstants c = ale::resolve_constants(setup);
  py::dict out;
  out["volSigma"] = c.vol_sigma;
  out["omegaNorm2"] = c.omega_norm2;
  out["intMomega"] = c.int_m_omega1;
  out["mP1"] = c.m_p1;
  return out;
}

py::dict asymptotics(int k, double lambda, const std::vector<double>& radii) {
  const ale::AsymptoticTable table = ale::asymptotic_table(k, lambda, radii);
  py::list rows;
  for (const ale::AsymptoticRow& row : table.rows) {
    py::dict entry;
    entry["r"] = row.r;
    entry["metric_deviation"] = row.metric_deviation;
    entry["moment_deviation"] = row.moment_deviation;
    entry["c_gamma"] = row.c_gamma;
    entry["a1"] = row.a1;
    entry["flag"] = row.flag;
    rows.append(entry);
  }
  py::dict out;
  out["rows"] = rows;
  out["metric_exponent"] = table.metric_exponent;
  out["moment_exponent"] = table.moment_exponent;
  out["omega_exponent"] = table.omega_exponent;
  out["csv"] = ale::to_csv(table);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical checks for Gibbons-Hawking ALE instantons";

  // Translators are tried newest first, so the base class goes in first.
  static py::exception<ale::Error> base(m, "AleError", PyExc_RuntimeError);
  static py::exception<ale::SchemaError> schema(m, "SchemaError", base.ptr());
  static py::exception<ale::SymmetryError> symmetry(m, "SymmetryError", schema.ptr());
  static py::exception<ale::ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<ale::FirstObstructionNonzero> first(m, "FirstObstructionNonzero", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ale::SymmetryError& e) {
      PyErr_SetString(symmetry.ptr(), e.what());
    } catch (const ale::SchemaError& e) {
      PyErr_SetString(schema.ptr(), e.what());
    } catch (const ale::ConfigError& e) {
      PyErr_SetString(config.ptr(), e.what());
    } catch (const ale::FirstObstructionNonzero& e) {
      PyErr_SetString(first.ptr(), e.what());
    } catch (const ale::Error& e) {
      PyErr_SetString(base.ptr(), (std::string(e.kind()) + ": " + e.what()).c_str());
    }
  });

  m.def("suite_names", &ale::suite_names);
  m.def("verify_json", &verify, py::arg("suite") = "all", py::arg("k") = 1, py::arg("lambda_") = 1.0,
        py::arg("tolerance") = std::map<std::string, double>{}, py::call_guard<py::gil_scoped_release>());
  m.def("obstruct_json", &obstruct, py::arg("document"), py::call_guard<py::gil_scoped_release>());
  m.def("constants", &constants, py::arg("k") = 1, py::arg("lambda_") = 1.0);
  m.def("asymptotics", &asymptotics, py::arg("k"), py::arg("lambda_"), py::arg("radii"));

  m.def("potential", [](int k, double lambda, const ale::Vec3& x) {
    return ale::eval_V(ale::GHConfig::canonical(k, lambda), x);
  }, py::arg("k"), py::arg("lambda_"), py::arg("x"));
  m.def("metric", [](int k, double lambda, const ale::Vec4& y, const std::string& patch) {
    return ale::gh_metric(ale::GHConfig::canonical(k, lambda), ale::ChartPoint::from_coords(y, patch_named(patch)));
  }, py::arg("k"), py::arg("lambda_"), py::arg("y"), py::arg("patch") = "north");
  m.def("vol_sigma", [](int k, double lambda) { return ale::vol_sigma(ale::GHConfig::canonical(k, lambda)); },
        py::arg("k"), py::arg("lambda_"));
}
