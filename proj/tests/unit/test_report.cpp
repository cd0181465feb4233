#include <doctest.h>

#include "../support/jet_oracle.hpp"
#include "ale/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ale;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ale_lab_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json dense(const std::vector<double>& values, int depth, std::size_t& at) {
  if (depth == 0) return values[at++];
  json out = json::array();
  for (int i = 0; i < 4; ++i) out.push_back(dense(values, depth - 1, at));
  return out;
}

json jet_document(const Jet2& H) {
  std::size_t at = 0;
  return {{"schema_version", 1}, {"k", 1}, {"lambda", 1.0}, {"H", dense({H.h.begin(), H.h.end()}, 4, at)}};
}

int run_obstruct(const json& doc, std::string* out_text = nullptr) {
  const auto path = scratch("jet.json");
  std::ofstream(path) << doc.dump();
  std::ostringstream out, err;
  const int code = cmd_obstruct(path.string(), "", out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_SUITE("cli_report") {
  TEST_CASE("suite result bookkeeping") {
    SuiteResult s{"demo", {}, 0.0};
    s.expect("absolute", 1.0, 1.0 + 1e-9, 1e-8, Provenance::trivial_identity);
    s.expect("relative", 100.0, 100.5, 1e-2, Provenance::paper_constant, true);
    s.at_most("bound", 2e-6, 1e-6, Provenance::derived_oracle);
    CHECK(s.checks.size() == 3);
    CHECK(s.failures() == 1);
    CHECK(!s.passed());
    const json j = to_json(s);
    CHECK(j["suite"] == "demo");
    CHECK(j["checks"][0]["provenance"] == "trivial-identity");
    CHECK(j["checks"][1]["provenance"] == "paper-constant");
    CHECK(j["checks"][2]["pass"] == false);
  }

  TEST_CASE("every suite check carries a provenance tag") {
    SuiteOptions options;
    for (const SuiteResult& s : run_suites("quadrature", options))
      for (const Check& c : s.checks) {
        const std::string tag = to_string(c.provenance);
        CHECK((tag == "paper-constant" || tag == "derived-oracle" || tag == "trivial-identity"));
      }
    CHECK_THROWS_AS(run_suites("nonsense", options), ConfigError);
  }

  TEST_CASE("verify command") {
    VerifyArgs args;
    args.suite = "quadrature";
    args.report_path = scratch("first.json").string();
    std::ostringstream out, err;
    CHECK(cmd_verify(args, out, err) == exit_ok);
    CHECK(out.str().find("s3_x1x4_plus_x2x3_sq") != std::string::npos);
    args.report_path = scratch("second.json").string();
    CHECK(cmd_verify(args, out, err) == exit_ok);
    CHECK(slurp(scratch("first.json")) == slurp(scratch("second.json")));
    const json report = json::parse(slurp(scratch("first.json")));
    CHECK(report["schema_version"] == 1);

    args.tolerance["s3_x1x4_plus_x2x3_sq"] = -1.0;
    CHECK(cmd_verify(args, out, err) == exit_check_failure);
    args.tolerance.clear();
    args.suite = "unknown";
    CHECK(cmd_verify(args, out, err) == exit_config_error);
    args.suite = "gh";
    args.k = 0;
    CHECK(cmd_verify(args, out, err) == exit_config_error);
  }

  TEST_CASE("gh and harmonic reports name the headline constants") {
    VerifyArgs args;
    args.k = 2;
    args.suite = "gh";
    std::ostringstream out, err;
    CHECK(cmd_verify(args, out, err) == exit_ok);
    CHECK(out.str().find("vol_sigma[k=2,lambda=1] computed=18.8495") != std::string::npos);
    args.k = 1;
    args.suite = "harmonic";
    std::ostringstream hout;
    CHECK(cmd_verify(args, hout, err) == exit_ok);
    CHECK(hout.str().find("omega_norm2[k=1,lambda=1]") != std::string::npos);
  }

  TEST_CASE("obstruct command") {
    std::string text;
    CHECK(run_obstruct(jet_document(Jet2{}), &text) == exit_ok);
    CHECK(text.find("\"wall_side\": \"on_wall\"") != std::string::npos);
    CHECK(text.find("wall side: on_wall") != std::string::npos);

    Mat3 block = Mat3::Zero();
    block(1, 1) = block(2, 2) = 1.0;
    const json canonical = jet_document(ale_test::jet_from_blocks(block, Mat3::Zero(), 3));
    CHECK(run_obstruct(canonical, &text) == exit_ok);
    const json report = json::parse(text.substr(0, text.rfind("wall side:")));
    CHECK(report["mu1"].get<double>() == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(report["constants"]["volSigma"]["source"] == "computed");
    CHECK(report["schema_version"] == 1);

    json asym = jet_document(Jet2{});
    asym["H"][0][1][2][3] = 1.0;
    CHECK(run_obstruct(asym, &text) == exit_config_error);
    CHECK(text.find("H[0][1][2][3]") != std::string::npos);

    json malformed = jet_document(Jet2{});
    malformed["H"][2] = "oops";
    CHECK(run_obstruct(malformed, &text) == exit_config_error);
    CHECK(text.find("$.H[2]") != std::string::npos);

    json wrong_version = jet_document(Jet2{});
    wrong_version["schema_version"] = 7;
    CHECK(run_obstruct(wrong_version, &text) == exit_config_error);

    json overrides = jet_document(ale_test::jet_from_blocks(block, Mat3::Zero(), 3));
    overrides["constants_override"] = {{"volSigma", 4.0 * M_PI}, {"omegaNorm2", 8.0 * M_PI * M_PI},
                                       {"intMomega", 8.0 * M_PI}, {"mP1", 2.0}};
    CHECK(run_obstruct(overrides, &text) == exit_ok);
    CHECK(text.find("user-supplied") != std::string::npos);

    json requested = jet_document(ale_test::jet_from_blocks(ale_test::random_symmetric(4), Mat3::Zero(), 3));
    std::size_t at = 0;
    requested["H2"] = dense(std::vector<double>(4096, 0.0), 6, at);
    CHECK(run_obstruct(requested, &text) == exit_check_failure);
    CHECK(text.find("FirstObstructionNonzero") != std::string::npos);
  }

  TEST_CASE("asymptotics table") {
    std::ostringstream out, err;
    CHECK(cmd_asympt(2, 1.0, {20.0, 50.0, 100.0}, out, err) == exit_ok);
    const std::string csv = out.str();
    CHECK(csv.rfind("r,metric_deviation,moment_deviation,c_gamma,a1,metric_exponent,moment_exponent,omega_exponent,flag", 0) ==
          0);
    const AsymptoticTable table = asymptotic_table(2, 1.0, {20.0, 50.0, 100.0});
    CHECK(table.rows.back().c_gamma == doctest::Approx(9.0).epsilon(1e-2));
    CHECK(table.metric_exponent < -3.9);
    CHECK(to_csv(table) == csv);
    std::ostringstream again;
    cmd_asympt(2, 1.0, {20.0, 50.0, 100.0}, again, err);
    CHECK(again.str() == csv);
    CHECK(asymptotic_table(1, 1.0, {20.0, 40.0, 80.0}).metric_exponent < -3.9);
    CHECK(cmd_asympt(1, 1.0, {}, out, err) == exit_config_error);
  }
}
