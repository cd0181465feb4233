#include <doctest.h>

#include "ale/gauss.hpp"
#include "ale/gh_space.hpp"
#include "ale/quadrature.hpp"

#include <cmath>
#include <random>

using namespace ale;

TEST_SUITE("quadrature") {
  TEST_CASE("one-dimensional rules") {
    const GaussRule rule = gauss_legendre(6, -1.0, 2.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 11);
    CHECK(sum == doctest::Approx((std::pow(2.0, 12) - 1.0) / 12.0).epsilon(1e-13));
    const GaussRule periodic = periodic_rule(8);
    double trig = 0.0;
    for (std::size_t i = 0; i < periodic.nodes.size(); ++i)
      trig += periodic.weights[i] * std::pow(std::cos(periodic.nodes[i]), 6);
    CHECK(trig == doctest::Approx(2.0 * M_PI * 10.0 / 32.0).epsilon(1e-13));
  }

  TEST_CASE("S3 integrals") {
    const QuadratureSpec spec;
    CHECK(integrate_S3([](const Vec4&) { return 1.0; }, 1.0, spec) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
    CHECK(integrate_S3([](const Vec4& x) { return std::pow(x[0] * x[3] + x[1] * x[2], 2); }, 1.0, spec) ==
          doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
    CHECK(integrate_S3([](const Vec4& x) { return std::pow(x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3], 2); },
                       1.0, spec) == doctest::Approx(2.0 * M_PI * M_PI / 3.0).epsilon(1e-12));
    // Degree exactness at the smallest allowed order.
    const double monomial = integrate_S3([](const Vec4& x) { return std::pow(x[0], 4) * x[1] * x[1] * x[2] * x[2]; }, 1.0,
                                         QuadratureSpec{4, 4});
    // 2 Gamma(5/2) Gamma(3/2)^2 Gamma(1/2) / Gamma(6).
    const double exact = 2.0 * (0.75 * std::sqrt(M_PI)) * std::pow(0.5 * std::sqrt(M_PI), 2) * std::sqrt(M_PI) / 120.0;
    CHECK(monomial == doctest::Approx(exact).epsilon(1e-12));
  }

  TEST_CASE("invalid specifications") {
    CHECK_THROWS_AS(integrate_S3([](const Vec4&) { return 1.0; }, 1.0, QuadratureSpec{2, 32}), ConfigError);
  }

  TEST_CASE("seeded closed triples") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const QuadraticTriple triple = random_closed_sd_quadratic(seed);
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> n(0.0, 1.0);
      for (int i = 0; i < 10; ++i) {
        const Vec4 x(n(rng), n(rng), n(rng), n(rng));
        CHECK(triple.exterior_derivative(x).max_abs() < 1e-12);
        const FormField field{2, [&triple](const Vec4& y) { return triple.assemble(y); }};
        CHECK(fd_d(field, x).max_abs() < 1e-8);
      }
      CHECK(std::abs(second_derivative_identity_residual(triple)) < 1e-12);
      const QuadraticTriple again = random_closed_sd_quadratic(seed);
      for (int i = 0; i < 3; ++i) CHECK((again.z[i] - triple.z[i]).cwiseAbs().maxCoeff() == 0.0);
    }
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(closed_quadratic_basis(Duality::self_dual).size()));
    const QuadraticTriple none = triple_from_null_coordinates(Duality::self_dual, zero);
    CHECK(none.assemble(Vec4(1, 2, 3, 4)).max_abs() == 0.0);
  }

  TEST_CASE("closedness basis is an exact null space") {
    for (Duality d : {Duality::self_dual, Duality::anti_self_dual}) {
      const Eigen::MatrixXd constraint = closedness_matrix(d);
      CHECK(constraint.rows() == 16);
      CHECK(constraint.cols() == 30);
      const auto& basis = closed_quadratic_basis(d);
      CHECK(!basis.empty());
      for (const Eigen::VectorXd& v : basis) CHECK((constraint * v).cwiseAbs().maxCoeff() == 0.0);
      Eigen::MatrixXd stacked(30, static_cast<Eigen::Index>(basis.size()));
      for (std::size_t i = 0; i < basis.size(); ++i) stacked.col(static_cast<Eigen::Index>(i)) = basis[i];
      Eigen::FullPivLU<Eigen::MatrixXd> lu(constraint);
      CHECK(static_cast<Eigen::Index>(basis.size()) == 30 - lu.rank());
      CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(stacked).rank() == static_cast<Eigen::Index>(basis.size()));
    }
  }

  TEST_CASE("pairing lemma") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const PairingResult pr = dCF_pairing(random_closed_sd_quadratic(seed));
      CHECK(std::abs(pr.lhs - pr.rhs) / std::max(1.0, std::abs(pr.rhs)) < 1e-6);
      for (double radius : {0.5, 2.0}) {
        QuadratureSpec spec;
        spec.radius = radius;
        CHECK(std::abs(dCF_pairing(random_closed_sd_quadratic(seed), spec).lhs - pr.lhs) < 1e-8);
      }
      CHECK(std::abs(dCF_pairing(random_closed_asd_quadratic(seed)).lhs) < 1e-8);
    }
    QuadraticTriple constant;
    constant.z[0] = Mat4::Identity();
    // z_1 = |x|^2 is constant on the sphere.
    const PairingResult pr = dCF_pairing(constant);
    CHECK(std::abs(pr.lhs) < 1e-8);
    CHECK(std::abs(pr.rhs) < 1e-12);
  }

  TEST_CASE("volume integration") {
    const GHConfig flat = GHConfig::single_center();
    VolumeRegion ball;
    ball.model_radius = 1.0;
    auto one = [](const ChartPoint&) { return 1.0; };
    const double volume = integrate_volume(flat, one, ball, QuadratureSpec{16, 32});
    CHECK(volume == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-6));
    auto three = [](const ChartPoint&) { return 3.0; };
    CHECK(integrate_volume(flat, three, ball, QuadratureSpec{16, 32}) == doctest::Approx(3.0 * volume).epsilon(1e-14));
  }
}
