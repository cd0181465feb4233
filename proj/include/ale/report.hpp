#pragma once

#include "ale/obstruction.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace ale {

enum class Provenance { paper_constant, derived_oracle, trivial_identity };
const char* to_string(Provenance p);

struct Check {
  std::string id;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool passed = false;
  Provenance provenance = Provenance::derived_oracle;
  std::string note;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
  std::size_t failures() const;
  // |computed - expected| <= tol (scaled by |expected| when relative).
  Check& expect(const std::string& id, double expected, double computed, double tol, Provenance p,
                bool relative = false, const std::string& note = {});
  // computed <= bound.
  Check& at_most(const std::string& id, double computed, double bound, Provenance p, const std::string& note = {});
  // An exception of the named kind was raised.
  Check& raised(const std::string& id, bool raised, Provenance p, const std::string& note = {});
  void append(const SuiteResult& other);
};

struct SuiteOptions {
  int k = 1;
  double lambda = 1.0;
  // Per-check tolerance overrides keyed by check id.
  std::map<std::string, double> tolerance;
  double tol(const std::string& id, double fallback) const;
};

SuiteResult suite_appendix_constants(const SuiteOptions& options);
SuiteResult suite_gh(const SuiteOptions& options);
SuiteResult suite_harmonic(const SuiteOptions& options);
SuiteResult suite_quadrature(const SuiteOptions& options);
SuiteResult suite_deformation(const SuiteOptions& options);
SuiteResult suite_gh_second_order(const SuiteOptions& options);

const std::vector<std::string>& suite_names();
std::vector<SuiteResult> run_suites(const std::string& name, const SuiteOptions& options);

nlohmann::json to_json(const SuiteResult& suite);
nlohmann::json to_json(const ObstructionReport& report);

// Exit codes shared by all commands.
enum ExitCode { exit_ok = 0, exit_check_failure = 1, exit_config_error = 2 };

// Parses the obstruction input document; SchemaError messages name the offending field path.
ObstructionRequest parse_obstruction_request(const nlohmann::json& doc);
std::string wall_summary(const ObstructionReport& report);

struct AsymptoticRow {
  double r = 0.0;
  double metric_deviation = 0.0;
  double moment_deviation = 0.0;
  double c_gamma = 0.0;
  double a1 = 0.0;
  bool flagged = false;
  std::string flag;
};

struct AsymptoticTable {
  std::vector<AsymptoticRow> rows;
  double metric_exponent = 0.0;
  double moment_exponent = 0.0;
  double omega_exponent = 0.0;
};

AsymptoticTable asymptotic_table(int k, double lambda, const std::vector<double>& radii);
std::string to_csv(const AsymptoticTable& table);

}  // namespace ale

namespace ale {

struct VerifyArgs {
  int k = 1;
  double lambda = 1.0;
  std::string suite = "all";
  std::map<std::string, double> tolerance;
  std::string report_path;
  bool timings = false;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_obstruct(const std::string& jet_path, const std::string& report_path, std::ostream& out, std::ostream& err);
int cmd_asympt(int k, double lambda, const std::vector<double>& radii, std::ostream& out, std::ostream& err);

}  // namespace ale
