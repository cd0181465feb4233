#include "ale/report.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"ALE instanton geometry lab"};
  app.require_subcommand(1);

  ale::VerifyArgs verify;
  std::vector<std::string> tol_overrides;
  auto* verify_cmd = app.add_subcommand("verify", "Run verification suites");
  verify_cmd->add_option("--k", verify.k, "Order of the A_k cluster")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--lambda", verify.lambda, "Center spacing")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--suite", verify.suite, "gh, harmonic, quadrature, deformation or all")
      ->check(CLI::IsMember(ale::suite_names()));
  verify_cmd->add_option("--tol", tol_overrides, "Tolerance override id=value (repeatable)");
  verify_cmd->add_option("--report", verify.report_path, "JSON report path");
  verify_cmd->add_flag("--timings", verify.timings, "Include wall-clock durations in the report");

  std::string jet_path, obstruct_report;
  auto* obstruct_cmd = app.add_subcommand("obstruct", "Obstruction coefficients from a metric jet");
  obstruct_cmd->add_option("--jet", jet_path, "Input JSON")->required();
  obstruct_cmd->add_option("--report", obstruct_report, "Output JSON path (stdout when omitted)");

  int asympt_k = 1;
  double asympt_lambda = 1.0;
  std::vector<double> radii;
  auto* asympt_cmd = app.add_subcommand("asympt", "Far-field decay data as CSV");
  asympt_cmd->add_option("--k", asympt_k)->check(CLI::PositiveNumber);
  asympt_cmd->add_option("--lambda", asympt_lambda)->check(CLI::PositiveNumber);
  asympt_cmd->add_option("--radii", radii, "Model radii")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ale::exit_config_error;
  }

  if (*verify_cmd) {
    for (const std::string& item : tol_overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        std::cerr << "ConfigError: --tol expects id=value, got '" << item << "'\n";
        return ale::exit_config_error;
      }
      try {
        verify.tolerance[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        std::cerr << "ConfigError: bad tolerance value in '" << item << "'\n";
        return ale::exit_config_error;
      }
    }
    return ale::cmd_verify(verify, std::cout, std::cerr);
  }
  if (*obstruct_cmd) return ale::cmd_obstruct(jet_path, obstruct_report, std::cout, std::cerr);
  return ale::cmd_asympt(asympt_k, asympt_lambda, radii, std::cout, std::cerr);
}
