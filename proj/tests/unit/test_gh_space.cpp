#include <doctest.h>

#include "ale/exterior/riemann.hpp"
#include "ale/gh_space.hpp"

#include <cmath>
#include <random>

using namespace ale;

namespace {

std::vector<ChartPoint> scattered(const GHConfig& cfg, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<ChartPoint> out;
  while (static_cast<int>(out.size()) < count) {
    const Vec3 x(u(rng), u(rng), u(rng));
    bool clear = true;
    for (const Center& c : cfg.centers) clear = clear && (x - c.position).norm() > 0.5;
    const Patch patch = preferred_patch(cfg, x);
    if (!clear || string_distance(cfg, x, patch) < 0.3) continue;
    out.push_back({x, u(rng), patch});
  }
  return out;
}

}  // namespace

TEST_SUITE("gh_space") {
  TEST_CASE("potential values") {
    CHECK(eval_V(GHConfig::canonical(1, 1.0), Vec3::Zero()) == doctest::Approx(1.0).epsilon(1e-14));
    const double expected = 0.5 * (1.0 / std::sqrt(5.0) + 2.0 / std::sqrt(2.0));
    CHECK(eval_V(GHConfig::canonical(2, 1.0), Vec3(0, 1, 0)) == doctest::Approx(expected).epsilon(1e-14));
    const GHConfig cfg = GHConfig::canonical(2, 1.0);
    const Vec3 far = 1e7 * Vec3(0.3, -0.5, 0.8).normalized();
    CHECK(far.norm() * eval_V(cfg, far) == doctest::Approx(1.5).epsilon(1e-6));
  }

  TEST_CASE("configuration invariants") {
    for (int k = 1; k <= 3; ++k) {
      const GHConfig cfg = GHConfig::canonical(k, 0.5);
      Vec3 weighted = Vec3::Zero();
      for (const Center& c : cfg.centers) weighted += c.multiplicity * c.position;
      CHECK(weighted.norm() < 1e-14);
      CHECK(cfg.total_multiplicity() == k + 1);
      CHECK(cfg.is_canonical_two_cluster());
    }
    CHECK_THROWS_AS(GHConfig::canonical(0, 1.0), ConfigError);
    CHECK_THROWS_AS(GHConfig::canonical(1, -1.0), ConfigError);
    CHECK_NOTHROW(GHConfig::single_center().validate());
  }

  TEST_CASE("evaluation domain errors") {
    const GHConfig cfg = GHConfig::canonical(1, 1.0);
    CHECK_THROWS_AS(eval_V(cfg, Vec3(1.0, 0, 0)), CenterTooClose);
    // North strings run toward -x1 from every center.
    CHECK_THROWS_AS(eval_eta(cfg, {Vec3(-3.0, 0, 0), 0.0, Patch::north}), OnDiracString);
    CHECK_NOTHROW(eval_eta(cfg, {Vec3(-3.0, 0, 0), 0.0, Patch::south}));
    CHECK_THROWS_AS(eval_eta(cfg, {Vec3(0.0, 0, 0), 0.0, Patch::south}), OnDiracString);
  }

  TEST_CASE("V is harmonic and d eta = *dV") {
    const GHConfig cfg = GHConfig::canonical(2, 1.0);
    for (const ChartPoint& p : scattered(cfg, 10, 3)) {
      const double h = 1e-3;
      double lap = 0.0;
      for (int a = 0; a < 3; ++a) {
        const Vec3 e = h * Vec3::Unit(a);
        lap += (eval_V(cfg, p.base + e) - 2.0 * eval_V(cfg, p.base) + eval_V(cfg, p.base - e)) / (h * h);
      }
      CHECK(std::abs(lap) < 1e-4);
      // curl A = grad V in the base.
      Mat3 dA;
      for (int b = 0; b < 3; ++b) {
        ChartPoint plus = p, minus = p;
        plus.base[b] += h;
        minus.base[b] -= h;
        dA.col(b) = (eval_eta(cfg, plus) - eval_eta(cfg, minus)) / (2.0 * h);
      }
      const Vec3 curl(dA(2, 1) - dA(1, 2), dA(0, 2) - dA(2, 0), dA(1, 0) - dA(0, 1));
      CHECK((curl - grad_V(cfg, p.base)).norm() < 1e-5);
    }
  }

  TEST_CASE("patch transition is an integer fiber shift") {
    const GHConfig cfg = GHConfig::canonical(2, 1.0);
    const Vec3 x(0.4, 1.2, -0.7);
    const Vec3 diff = eval_eta(cfg, {x, 0.0, Patch::north}) - eval_eta(cfg, {x, 0.0, Patch::south});
    // The difference is d(sum mult_i phi_i), so its curl vanishes.
    const double h = 1e-4;
    Mat3 dD;
    for (int b = 0; b < 3; ++b) {
      const Vec3 e = h * Vec3::Unit(b);
      dD.col(b) = ((eval_eta(cfg, {x + e, 0.0, Patch::north}) - eval_eta(cfg, {x + e, 0.0, Patch::south})) -
                   (eval_eta(cfg, {x - e, 0.0, Patch::north}) - eval_eta(cfg, {x - e, 0.0, Patch::south}))) /
                  (2.0 * h);
    }
    CHECK((dD - dD.transpose()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(diff.norm() > 0.1);
    // Patch-independent scalars.
    const Mat4 gN = gh_metric(cfg, {x, 0.0, Patch::north});
    const Mat4 gS = gh_metric(cfg, {x, 0.0, Patch::south});
    CHECK(std::abs(gN.determinant() - gS.determinant()) < 1e-12);
    CHECK(std::abs(gN(3, 3) - gS(3, 3)) < 1e-12);
  }

  TEST_CASE("frame sample invariants") {
    for (int k = 1; k <= 3; ++k) {
      const GHConfig cfg = GHConfig::canonical(k, 1.0);
      for (const ChartPoint& p : scattered(cfg, 8, 10 + k)) {
        const FrameSample s = metric_at(cfg, p);
        CHECK((s.metric - s.metric.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        Mat4 rebuilt = Mat4::Zero();
        for (const Vec4& e : s.coframe) rebuilt += e * e.transpose();
        CHECK((rebuilt - s.metric).cwiseAbs().maxCoeff() < 1e-12);
        const Mat4 I = Mat4::Identity();
        for (int i = 0; i < 3; ++i) {
          CHECK((s.J[i] * s.J[i] + I).cwiseAbs().maxCoeff() < 1e-10);
          CHECK((s.J[i].transpose() * s.metric * s.J[i] - s.metric).cwiseAbs().maxCoeff() < 1e-10);
          // omega_i(X, Y) = g(J_i X, Y).
          CHECK((as_matrix(s.triple[i]) - (s.metric * s.J[i]).transpose()).cwiseAbs().maxCoeff() < 1e-10);
          const SdSplit split = split_sd(s.metric, s.triple[i]);
          CHECK(split.asd.max_abs() < 1e-10);
          CHECK(inner(s.metric, s.triple[i], s.triple[i]) == doctest::Approx(2.0).epsilon(1e-12));
        }
        CHECK((s.J[0] * s.J[1] - s.J[2]).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((s.J[1] * s.J[2] - s.J[0]).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }

  TEST_CASE("single center is flat") {
    const GHConfig flat = GHConfig::single_center();
    for (const ChartPoint& p : scattered(flat, 5, 4)) {
      const RiemannData data = riemann_fd(gh_metric_field(flat, p.patch), p.coords(), FdScheme{1e-3, false});
      CHECK(data.riemann.max_abs() < 1e-5);
    }
  }

  TEST_CASE("triple is closed and the metric Ricci-flat") {
    const GHConfig cfg = GHConfig::canonical(2, 1.0);
    for (const ChartPoint& p : scattered(cfg, 6, 5)) {
      const auto triple = gh_triple_field(cfg, p.patch);
      for (int i = 0; i < 3; ++i) {
        const FormField field{2, [&triple, i](const Vec4& y) { return triple(y)[static_cast<std::size_t>(i)]; }};
        CHECK(fd_d(field, p.coords()).max_abs() < 1e-5);
      }
      const RiemannData data = riemann_fd(gh_metric_field(cfg, p.patch), p.coords());
      CHECK(ricci(data).cwiseAbs().maxCoeff() < 1e-5);
    }
  }

  TEST_CASE("moment map") {
    for (int k = 1; k <= 3; ++k) {
      const GHConfig cfg = GHConfig::canonical(k, 1.5);
      CHECK(moment_map(cfg, cfg.centers.back().position) == doctest::Approx((k + 1) * 1.5).epsilon(1e-14));
    }
    CHECK(moment_map(GHConfig::canonical(1, 1.0), Vec3::Zero()) == doctest::Approx(2.0).epsilon(1e-14));
    const GHConfig cfg = GHConfig::canonical(2, 1.0);
    const Vec3 dir = Vec3(0.2, 0.9, -0.4).normalized();
    const Vec3 x = 1e6 * dir;
    const double r2 = 2.0 * 3.0 * x.norm();
    CHECK(2.0 * moment_map(cfg, x) / r2 == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("xi contracts omega_1 to -dm") {
    const GHConfig cfg = GHConfig::canonical(3, 1.0);
    for (const ChartPoint& p : scattered(cfg, 10, 6)) {
      const Vec4 xi = xi_field(cfg, p);
      const Vec4 contracted = as_covector(interior(xi, gh_triple(cfg, p)[0]));
      Vec4 dm = Vec4::Zero();
      dm.head<3>() = grad_moment_map(cfg, p.base);
      CHECK((contracted + dm).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("sigma integrals") {
    const GHConfig half = GHConfig::canonical(2, 0.5);
    CHECK(vol_sigma(half) == doctest::Approx(3.0 * M_PI).epsilon(1e-12));
    const GHConfig one = GHConfig::canonical(1, 1.0);
    CHECK(sigma_integrate(one, [&](double x1) { return moment_map(one, Vec3(x1, 0, 0)); }) ==
          doctest::Approx(8.0 * M_PI).epsilon(1e-12));
    const GHConfig three = GHConfig::canonical(3, 1.0);
    const double int_phi = sigma_integrate(three, [](double x1) { return 8.0 * x1; });
    CHECK(int_phi == doctest::Approx(-64.0 * M_PI).epsilon(1e-12));
    for (int k = 1; k <= 3; ++k)
      for (double lam : {0.5, 1.0, 2.0})
        CHECK(vol_sigma(GHConfig::canonical(k, lam)) == doctest::Approx(2.0 * M_PI * (k + 1) * lam).epsilon(1e-8));
  }

  TEST_CASE("singular sigma integrand is rejected") {
    const GHConfig cfg = GHConfig::canonical(1, 1.0);
    CHECK_THROWS_AS(sigma_integrate(cfg, [](double x1) { return 1.0 / (x1 - 1.0); }), QuadratureDivergence);
  }
}
