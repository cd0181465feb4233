// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "../support/jet_oracle.hpp"
#include "ale/exterior/riemann.hpp"
#include "ale/gh_space.hpp"
#include "ale/obstruction.hpp"
#include "ale/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ale;
using ale_test::jet_from_blocks;
using ale_test::random_field;
using ale_test::random_first_row_zero;
using ale_test::random_jet2;
using ale_test::random_jet4;
using ale_test::random_symmetric;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// Worst failing check across suites, or the count of checks when all pass.
void absorb(Outcome& out, const std::vector<SuiteResult>& results, const std::string& waived = {}) {
  std::size_t total = 0;
  for (const SuiteResult& s : results)
    for (const Check& c : s.checks) {
      ++total;
      if (c.passed) continue;
      if (!waived.empty() && c.id.rfind(waived, 0) == 0) {
        out.detail << " [warning: " << c.id << " computed=" << c.computed << "]";
        continue;
      }
      out.require(false, s.name + "/" + c.id + " computed=" + std::to_string(c.computed));
    }
  out.detail << " checks=" << total;
}

double max_abs_diff(const Mat3& a, const Mat3& b) { return (a - b).cwiseAbs().maxCoeff(); }

Jet2 averaged(const Jet2& H, const std::vector<Mat4>& group) {
  Jet2 out;
  const std::vector<double> avg = average_tensor({H.h.begin(), H.h.end()}, 4, group);
  std::copy(avg.begin(), avg.end(), out.h.begin());
  return out;
}

Jet4 averaged(const Jet4& H2, const std::vector<Mat4>& group) {
  Jet4 out;
  out.h = average_tensor(H2.h, 6, group);
  return out;
}

void criterion_appendix(Outcome& out) {
  std::vector<SuiteResult> results;
  for (int k = 1; k <= 3; ++k)
    for (double lambda : {0.5, 1.0, 2.0}) {
      SuiteOptions o;
      o.k = k;
      o.lambda = lambda;
      results.push_back(suite_appendix_constants(o));
    }
  absorb(out, results);
}

void criterion_s3(Outcome& out) { absorb(out, {suite_quadrature(SuiteOptions{})}); }

void criterion_gh(Outcome& out) {
  std::vector<SuiteResult> results;
  for (int k = 1; k <= 3; ++k) {
    SuiteOptions o;
    o.k = k;
    results.push_back(suite_gh(o));
  }
  absorb(out, results);
}

void criterion_harmonic(Outcome& out) {
  std::vector<SuiteResult> results;
  for (int k = 1; k <= 3; ++k) {
    SuiteOptions o;
    o.k = k;
    results.push_back(suite_harmonic(o));
  }
  // The k = 2 ratio is a stretch target; its consistency companion stays mandatory.
  absorb(out, results, "a1_ratio");
}

void criterion_obstruction(Outcome& out) {
  double fd_worst = 0.0, gauge_worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Jet2 H = random_jet2(1000 + seed);
    const CurvatureBlock block = curvature_from_jet2(H);
    const RiemannData fd = riemann_fd(polynomial_metric(H), Vec4::Zero(), FdScheme{1e-2, true});
    const CurvatureBlock oracle = block_from_riemann(fd, flat_sd_basis(), flat_asd_basis());
    fd_worst = std::max({fd_worst, max_abs_diff(block.Rplus, oracle.Rplus), max_abs_diff(block.Rminus, oracle.Rminus)});
    Jet2 shifted = H;
    shifted += cubic_gauge_jet(random_field(2000 + seed, 256));
    for (const Jet2& other : {gauge_project(H), shifted}) {
      const CurvatureBlock b = curvature_from_jet2(other);
      gauge_worst = std::max({gauge_worst, max_abs_diff(b.Rplus, block.Rplus), max_abs_diff(b.Rminus, block.Rminus)});
    }
  }
  out.require(fd_worst <= 1e-6, "curvature vs FD oracle");
  out.require(gauge_worst <= 1e-10, "gauge invariance");

  const InstantonConstants k1 = resolve_constants(ObstructionSetup{});
  int iff_failures = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Vec3 zero = lambda_obstruction(curvature_from_jet2(jet_from_blocks(random_first_row_zero(seed), random_symmetric(seed + 40), seed)).Rplus, k1);
    const Vec3 open = lambda_obstruction(curvature_from_jet2(jet_from_blocks(random_symmetric(seed + 80), random_symmetric(seed + 40), seed)).Rplus, k1);
    if (zero.norm() > 1e-10) ++iff_failures;
    if (open.norm() < 1e-6) ++iff_failures;
  }
  out.require(iff_failures == 0, "lambda vanishes iff first row vanishes");

  Mat3 canonical = Mat3::Zero();
  canonical(1, 1) = canonical(2, 2) = 1.0;
  ObstructionRequest request;
  request.H = jet_from_blocks(canonical, Mat3::Zero(), 7);
  const ObstructionReport report = compute_obstruction(request);
  const double mu1 = report.mu1.value_or(NAN);
  out.require(std::abs(mu1 - 4.0) <= 1e-6 * 4.0, "mu1(k=1) = 4");

  double triangle_worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Mat3 block = random_first_row_zero(3000 + seed);
    const double D = 10.0 * random_symmetric(4000 + seed)(0, 0);
    const double generic = mu1_generic(block, k1);
    triangle_worst = std::max(triangle_worst, std::abs(mu1_Ak(block, D, 1, k1) - generic) / std::max(1.0, std::abs(generic)));
  }
  out.require(triangle_worst <= 1e-12, "mu1_Ak(k=1) = mu1_generic");

  double remark_worst = 0.0, moment_worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    ObstructionSetup setup;
    setup.k = k;
    const InstantonConstants c = resolve_constants(setup);
    const Mat3 block = random_first_row_zero(5000 + static_cast<std::uint64_t>(k));
    const double minor = minor_of(block);
    const double D = 16.0 * (k - 1) / (k + 1.0) * minor;
    const double expected = 4.0 * k * c.vol_sigma * c.vol_sigma / ((k + 1) * c.omega_norm2) * minor;
    remark_worst = std::max(remark_worst, std::abs(mu1_Ak(block, D, k, c) - expected) / std::max(1.0, std::abs(expected)));
    const double identity = M_PI * (k + 1) * std::pow(c.vol_sigma / (2.0 * M_PI), 2);
    moment_worst = std::max(moment_worst, std::abs(c.int_m_omega1 - identity) / identity);
  }
  out.require(remark_worst <= 1e-10, "remark identity");
  out.require(moment_worst <= 1e-8, "int m omega_1 identity");
  out.require(wall_side(0.5) == WallSide::einstein_side && wall_side(0.0) == WallSide::on_wall &&
                  wall_side(-0.5) == WallSide::empty_side,
              "wall side");
  out.detail << " fd=" << fd_worst << " gauge=" << gauge_worst << " mu1=" << mu1 << " triangle=" << triangle_worst
             << " remark=" << remark_worst;
}

void criterion_deformation(Outcome& out) {
  SuiteOptions o;
  absorb(out, {suite_deformation(o), suite_gh_second_order(o)});
}

void criterion_d(Outcome& out) {
  double oracle_worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Jet2 H = jet_from_blocks(random_first_row_zero(6000 + seed), random_symmetric(6100 + seed), 6200 + seed);
    const Jet4 H2 = random_jet4(6300 + seed);
    oracle_worst = std::max(oracle_worst, std::abs(d2_invariant(H, H2) - ale_test::symbolic_d2(H, H2)));
  }
  out.require(oracle_worst <= 1e-6, "FD vs symbolic oracle");

  double symmetric_worst = 0.0;
  const std::vector<std::vector<Mat4>> groups{binary_dihedral_group(2), binary_dihedral_group(3), binary_tetrahedral_group()};
  std::uint64_t seed = 7000;
  for (const auto& group : groups) {
    const Jet2 H = averaged(jet_from_blocks(random_first_row_zero(seed), random_symmetric(seed + 1), seed + 2), group);
    const Jet4 H2 = averaged(random_jet4(seed + 3), group);
    symmetric_worst = std::max(symmetric_worst, std::abs(d2_invariant(H, H2)));
    seed += 10;
  }
  out.require(symmetric_worst <= 1e-8, "D = 0 for D/E-symmetric jets");

  double gauge_worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const std::vector<Mat4> group = cyclic_group(k + 1);
    const Jet2 H = averaged(jet_from_blocks(random_first_row_zero(seed), random_symmetric(seed + 1), seed + 2), group);
    const Jet4 H2 = averaged(random_jet4(seed + 3), group);
    Jet4 moved = H2;
    moved += quintic_gauge_jet(average_tensor(random_field(seed + 4, 4096, 0.3), 6, group));
    gauge_worst = std::max(gauge_worst, std::abs(d2_invariant(H, moved) - d2_invariant(H, H2)));
    seed += 10;
  }
  out.require(gauge_worst <= 1e-6, "invariant gauge invariance");
  out.detail << " oracle=" << oracle_worst << " symmetric=" << symmetric_worst << " gauge=" << gauge_worst;
}

struct Criterion {
  int number;
  const char* title;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "appendix constants over k x lambda grid", 30.0, criterion_appendix},
      {2, "S3 identities and pairing lemma", 10.0, criterion_s3},
      {3, "Gibbons-Hawking geometry", 60.0, criterion_gh},
      {4, "L2 harmonic form", 120.0, criterion_harmonic},
      {5, "obstruction pipeline", 60.0, criterion_obstruction},
      {6, "deformation formalism", 60.0, criterion_deformation},
      {7, "second-derivative invariant D", 60.0, criterion_d},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) out.require(false, "runtime budget");
    if (!out.passed) ++failures;
    std::printf("%s criterion %d: %s (%.2f s of %.0f s)%s\n", out.passed ? "PASS" : "FAIL", c.number, c.title, seconds,
                c.budget_seconds, out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
