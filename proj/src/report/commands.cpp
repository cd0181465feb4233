#include "ale/l2_harmonic.hpp"
#include "ale/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ale {

using nlohmann::json;

namespace {

// Adding +0.0 folds -0.0 into 0.0 so reports never print a signed zero.
double plain(double v) { return v + 0.0; }

json matrix_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({plain(m(i, 0)), plain(m(i, 1)), plain(m(i, 2))});
  return rows;
}

json optional_json(const std::optional<double>& v) { return v ? json(plain(*v)) : json(nullptr); }

const char* source_tag(ConstantSource s) { return s == ConstantSource::computed ? "computed" : "user-supplied"; }

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) throw SchemaError(path + ": expected a number");
  return node.get<double>();
}

// Reads a dense nested array of the given depth with extent 4 per level.
void read_dense(const json& node, const std::string& path, int depth, std::vector<double>& out) {
  if (depth == 0) {
    out.push_back(number_at(node, path));
    return;
  }
  if (!node.is_array() || node.size() != 4) throw SchemaError(path + ": expected an array of length 4");
  for (std::size_t i = 0; i < 4; ++i) read_dense(node[i], path + "[" + std::to_string(i) + "]", depth - 1, out);
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  return number_at(obj[key], path + "." + key);
}

}  // namespace

json to_json(const SuiteResult& suite) {
  json checks = json::array();
  for (const Check& c : suite.checks)
    checks.push_back({{"id", c.id},
                      {"expected", c.expected},
                      {"computed", c.computed},
                      {"tolerance", c.tolerance},
                      {"relative", c.relative},
                      {"pass", c.passed},
                      {"provenance", to_string(c.provenance)},
                      {"note", c.note}});
  return {{"suite", suite.name}, {"pass", suite.passed()}, {"checks", checks}};
}

json to_json(const ObstructionReport& r) {
  json det = {{"coefficient_t4", r.A ? json(r.minor * *r.A) : json(nullptr)}, {"t", r.det.t}, {"value", r.det.value}};
  json blocks = json::array();
  for (const Mat3& b : r.det.block) blocks.push_back(matrix_json(b));
  det["block"] = blocks;
  const InstantonConstants& c = r.constants;
  const char* src = source_tag(c.source);
  return {{"schema_version", 1},
          {"Rplus_block", matrix_json(r.Rplus_block)},
          {"lambda", {plain(r.lambda[0]), plain(r.lambda[1]), plain(r.lambda[2])}},
          {"minor", plain(r.minor)},
          {"D", optional_json(r.D)},
          {"mu1", optional_json(r.mu1)},
          {"A", optional_json(r.A)},
          {"A_moment_form", optional_json(r.A_moment_form)},
          {"det_leading", det},
          {"det_bold_Rplus", plain(r.det_bold)},
          {"wall_side", to_string(r.side)},
          {"crossing", "d/dt det R_+ = -a minor^2 < 0 with a > 0"},
          {"z_leading", r.mu1 ? json(plain(-*r.mu1)) : json(nullptr)},
          {"first_obstruction", r.first_obstruction_status},
          {"gauge", {{"projected", r.gauge_projected},
                     {"rank", r.gauge.rank},
                     {"residual_before", r.gauge.residual_before},
                     {"residual_after", r.gauge.residual_after}}},
          {"constants", {{"volSigma", {{"value", c.vol_sigma}, {"source", src}}},
                         {"omegaNorm2", {{"value", c.omega_norm2}, {"source", src}}},
                         {"intMomega", {{"value", c.int_m_omega1}, {"source", src}}},
                         {"mP1", {{"value", c.m_p1}, {"source", src}}}}}};
}

ObstructionRequest parse_obstruction_request(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$: expected an object");
  if (doc.contains("schema_version") && (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != 1))
    throw SchemaError("$.schema_version: only version 1 is supported");
  ObstructionRequest req;
  if (!doc.contains("k") || !doc["k"].is_number_integer()) throw SchemaError("$.k: expected an integer");
  req.setup.k = doc["k"].get<int>();
  if (req.setup.k < 1) throw SchemaError("$.k: must be >= 1");
  if (!doc.contains("lambda")) throw SchemaError("$.lambda: missing");
  req.setup.lambda = number_at(doc["lambda"], "$.lambda");
  if (!(req.setup.lambda > 0.0)) throw SchemaError("$.lambda: must be positive");
  if (doc.contains("series")) {
    const std::string s = doc["series"].is_string() ? doc["series"].get<std::string>() : "";
    if (s == "A") req.setup.series = Series::A;
    else if (s == "D") req.setup.series = Series::D;
    else if (s == "E") req.setup.series = Series::E;
    else throw SchemaError("$.series: expected \"A\", \"D\" or \"E\"");
  }
  if (!doc.contains("H")) throw SchemaError("$.H: missing");
  std::vector<double> flat;
  read_dense(doc["H"], "$.H", 4, flat);
  std::array<double, 256> raw{};
  std::copy(flat.begin(), flat.end(), raw.begin());
  req.H = Jet2::ingest(raw);
  if (doc.contains("H2") && !doc["H2"].is_null()) {
    std::vector<double> flat2;
    read_dense(doc["H2"], "$.H2", 6, flat2);
    req.H2 = Jet4::ingest(flat2);
  }
  if (doc.contains("constants_override") && !doc["constants_override"].is_null()) {
    const json& o = doc["constants_override"];
    if (!o.is_object()) throw SchemaError("$.constants_override: expected an object");
    const std::string base = "$.constants_override";
    req.setup.overrides.vol_sigma = optional_number(o, "volSigma", base);
    req.setup.overrides.omega_norm2 = optional_number(o, "omegaNorm2", base);
    req.setup.overrides.int_m_omega1 = optional_number(o, "intMomega", base);
    req.setup.overrides.m_p1 = optional_number(o, "mP1", base);
  }
  if (doc.contains("gauge_project")) {
    if (!doc["gauge_project"].is_boolean()) throw SchemaError("$.gauge_project: expected a boolean");
    req.gauge = doc["gauge_project"].get<bool>();
  }
  if (doc.contains("t_values")) {
    req.t_values.clear();
    if (!doc["t_values"].is_array()) throw SchemaError("$.t_values: expected an array");
    for (std::size_t i = 0; i < doc["t_values"].size(); ++i)
      req.t_values.push_back(number_at(doc["t_values"][i], "$.t_values[" + std::to_string(i) + "]"));
  }
  if (doc.contains("wall_tolerance")) req.wall_tolerance = number_at(doc["wall_tolerance"], "$.wall_tolerance");
  return req;
}

std::string wall_summary(const ObstructionReport& r) {
  std::ostringstream os;
  os << std::setprecision(6) << "wall side: " << to_string(r.side) << " (det bold R_+ = " << plain(r.det_bold)
     << ", lambda = (" << plain(r.lambda[0]) << ", " << plain(r.lambda[1]) << ", " << plain(r.lambda[2]) << ")";
  if (r.mu1) os << ", mu1 = " << plain(*r.mu1);
  if (r.A) os << ", A = " << plain(*r.A);
  os << ")";
  return os.str();
}

AsymptoticTable asymptotic_table(int k, double lambda, const std::vector<double>& radii) {
  if (radii.empty()) throw ConfigError("no radii given");
  const GHConfig cfg = GHConfig::canonical(k, lambda);
  const HarmonicFormBundle bundle = build_Omega(cfg);
  AsymptoticTable table;
  std::vector<double> omega_max;
  for (double r : radii) {
    if (!(r > 0.0)) throw ConfigError("radii must be positive");
    AsymptoticRow row;
    row.r = r;
    row.metric_deviation = metric_deviation(cfg, r);
    row.moment_deviation = moment_deviation(cfg, r);
    try {
      const AsymptoticFit fit = asymptotic_fit(bundle, {r});
      row.c_gamma = fit.c_gamma;
      row.a1 = fit.a1;
    } catch (const FitUnstable& e) {
      row.flagged = true;
      row.flag = std::string("FitUnstable: ") + e.what();
      row.c_gamma = row.a1 = std::nan("");
    }
    double w = 0.0;
    for (const ChartPoint& p : far_field_points(cfg, r)) w = std::max(w, norm(gh_metric(cfg, p), bundle.omega_at(p)));
    omega_max.push_back(w);
    table.rows.push_back(row);
  }
  if (radii.size() >= 2) {
    std::vector<double> metric, moment;
    for (const auto& row : table.rows) {
      metric.push_back(row.metric_deviation);
      moment.push_back(row.moment_deviation);
    }
    table.metric_exponent = log_log_slope(radii, metric);
    table.moment_exponent = log_log_slope(radii, moment);
    table.omega_exponent = log_log_slope(radii, omega_max);
  } else {
    table.metric_exponent = table.moment_exponent = table.omega_exponent = std::nan("");
  }
  return table;
}

std::string to_csv(const AsymptoticTable& table) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "r,metric_deviation,moment_deviation,c_gamma,a1,metric_exponent,moment_exponent,omega_exponent,flag\n";
  for (const auto& row : table.rows)
    os << row.r << ',' << row.metric_deviation << ',' << row.moment_deviation << ',' << row.c_gamma << ',' << row.a1
       << ',' << table.metric_exponent << ',' << table.moment_exponent << ',' << table.omega_exponent << ','
       << row.flag << '\n';
  return os.str();
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<SuiteResult> results;
  try {
    GHConfig::canonical(args.k, args.lambda).validate();
    SuiteOptions options{args.k, args.lambda, args.tolerance};
    results = run_suites(args.suite, options);
  } catch (const ConfigError& e) {
    err << "ConfigError: " << e.what() << '\n';
    return exit_config_error;
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return exit_check_failure;
  }
  bool all_pass = true;
  json report = {{"schema_version", 1}, {"k", args.k}, {"lambda", args.lambda}, {"suite", args.suite}};
  json suites = json::array();
  for (const SuiteResult& r : results) {
    all_pass = all_pass && r.passed();
    json js = to_json(r);
    if (args.timings) js["seconds"] = r.seconds;
    suites.push_back(js);
    for (const Check& c : r.checks)
      out << (c.passed ? "PASS " : "FAIL ") << r.name << ' ' << c.id << " computed=" << std::setprecision(10)
          << c.computed << " expected=" << c.expected << " [" << to_string(c.provenance) << "]\n";
  }
  report["suites"] = suites;
  report["pass"] = all_pass;
  if (!args.report_path.empty()) {
    std::ofstream file(args.report_path);
    if (!file) {
      err << "ConfigError: cannot write " << args.report_path << '\n';
      return exit_config_error;
    }
    file << report.dump(2) << '\n';
  }
  return all_pass ? exit_ok : exit_check_failure;
}

int cmd_obstruct(const std::string& jet_path, const std::string& report_path, std::ostream& out, std::ostream& err) {
  std::ifstream file(jet_path);
  if (!file) {
    err << "ConfigError: cannot read " << jet_path << '\n';
    return exit_config_error;
  }
  try {
    json doc;
    try {
      doc = json::parse(file);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("$: invalid JSON: ") + e.what());
    }
    const ObstructionReport report = compute_obstruction(parse_obstruction_request(doc));
    const std::string text = to_json(report).dump(2);
    if (report_path.empty()) {
      out << text << '\n';
    } else {
      std::ofstream dest(report_path);
      if (!dest) throw ConfigError("cannot write " + report_path);
      dest << text << '\n';
    }
    out << wall_summary(report) << '\n';
    return exit_ok;
  } catch (const SchemaError& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return exit_config_error;
  } catch (const ConfigError& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return exit_config_error;
  } catch (const MissingConstants& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return exit_config_error;
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return exit_check_failure;
  }
}

int cmd_asympt(int k, double lambda, const std::vector<double>& radii, std::ostream& out, std::ostream& err) {
  try {
    out << to_csv(asymptotic_table(k, lambda, radii));
    return exit_ok;
  } catch (const ConfigError& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return exit_config_error;
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return exit_check_failure;
  }
}

}  // namespace ale
