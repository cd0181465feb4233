#include <doctest.h>

#include "ale/exterior/connection.hpp"
#include "ale/exterior/deformation.hpp"
#include "ale/exterior/forms.hpp"
#include "ale/exterior/riemann.hpp"
#include "ale/gh_space.hpp"
#include "ale/obstruction.hpp"

#include <cmath>
#include <random>

using namespace ale;

namespace {

Mat4 random_spd(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  Mat4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = u(rng);
  return Mat4::Identity() + a * a.transpose();
}

Form random_form(int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Form f(degree);
  for (int s = 0; s < f.size(); ++s) f[s] = n(rng);
  return f;
}

FrameField constant_frame(const std::array<Form, 3>& frame) {
  return [frame](const Vec4&) { return frame; };
}

MetricField flat_metric() {
  return [](const Vec4&) { return Mat4::Identity(); };
}

}  // namespace

TEST_SUITE("exterior_calculus") {
  TEST_CASE("finite-difference exterior derivative") {
    const FormField constant{2, [](const Vec4&) { return dx_wedge(0, 2) + 3.0 * dx_wedge(1, 3); }};
    CHECK(fd_d(constant, Vec4(0.3, 0.1, -0.2, 0.5)).max_abs() < 1e-12);
    const FormField x0_dx1{1, [](const Vec4& x) { return one_form(x[0] * Vec4::Unit(1)); }};
    const Form d = fd_d(x0_dx1, Vec4(0.7, -0.2, 0.4, 1.1), FdScheme{1e-3, false});
    CHECK((d - dx_wedge(0, 1)).max_abs() < 10 * 1e-6);
  }

  TEST_CASE("d of d vanishes with second-order convergence") {
    const auto smooth = [](const Vec4& x) {
      return one_form(Vec4(std::sin(x[1]) * x[2], std::exp(0.3 * x[0]) * x[3], std::cos(x[0] * x[3]), x[1] * x[2] * x[2]));
    };
    const FormField alpha{1, smooth};
    const Vec4 p(0.2, -0.4, 0.3, 0.6);
    auto residual = [&](double h) {
      const FormField d_alpha{2, [&, h](const Vec4& x) { return fd_d(alpha, x, FdScheme{h, false}); }};
      return fd_d(d_alpha, p, FdScheme{h, false}).max_abs();
    };
    CHECK(residual(1e-2) < 1e-6);
    // Against a Richardson reference, halving the step quarters the error.
    auto error = [&](double h) { return (fd_d(alpha, p, FdScheme{h, false}) - fd_d(alpha, p, FdScheme{1e-3, true})).max_abs(); };
    const double ratio = error(2e-2) / error(1e-2);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("hodge star on the euclidean metric") {
    const Mat4 I = Mat4::Identity();
    CHECK((hodge_star(I, dx_wedge(0, 1)) - dx_wedge(2, 3)).max_abs() < 1e-15);
    const SdSplit split = split_sd(I, flat_sd_basis()[0]);
    CHECK((split.sd - flat_sd_basis()[0]).max_abs() < 1e-15);
    CHECK(split.asd.max_abs() < 1e-15);
    for (int i = 0; i < 3; ++i) {
      CHECK((hodge_star(I, flat_sd_basis()[i]) - flat_sd_basis()[i]).max_abs() < 1e-15);
      CHECK((hodge_star(I, flat_asd_basis()[i]) + flat_asd_basis()[i]).max_abs() < 1e-15);
    }
    CHECK(inner(I, flat_sd_basis()[0], flat_sd_basis()[0]) == doctest::Approx(2.0));
  }

  TEST_CASE("hodge star properties on random metrics") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Mat4 g = random_spd(seed);
      for (int deg = 0; deg <= 4; ++deg) {
        const Form f = random_form(deg, 100 + seed);
        const double sign = (deg * (4 - deg)) % 2 == 0 ? 1.0 : -1.0;
        CHECK((hodge_star(g, hodge_star(g, f)) - sign * f).max_abs() < 1e-12);
      }
      const Form two = random_form(2, 200 + seed);
      const SdSplit split = split_sd(g, two);
      CHECK((split.sd + split.asd - two).max_abs() < 1e-13);
      CHECK(std::abs(inner(g, split.sd, split.asd)) < 1e-12);
      CHECK((hodge_star(g, split.sd) - split.sd).max_abs() < 1e-12);
      CHECK((hodge_star(g, split.asd) + split.asd).max_abs() < 1e-12);
    }
    Mat4 singular = Mat4::Identity();
    singular(3, 3) = 0.0;
    CHECK_THROWS_AS(hodge_star(singular, dx_wedge(0, 1)), SingularMetric);
  }

  TEST_CASE("complex structures of an orthonormal frame") {
    const Mat4 g = random_spd(7);
    const auto frame = sd_frame(g);
    for (int i = 0; i < 3; ++i) {
      const Mat4 J = complex_structure(g, frame[i]);
      CHECK((J * J + Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-10);
      const Vec4 beta(0.3, -1.0, 0.2, 0.5);
      // On covectors J acts through the metric: J beta = (J beta^sharp)^flat.
      CHECK((apply_J(g, frame[i], beta) - g * J * g.inverse() * beta).norm() < 1e-10);
      for (int j = 0; j < 3; ++j)
        CHECK(inner(g, frame[i], frame[j]) == doctest::Approx(i == j ? 2.0 : 0.0).epsilon(1e-12));
    }
    CHECK(frame_orthonormality_defect(g, frame) < 1e-10);
  }

  TEST_CASE("connection of constant frames vanishes") {
    const ConnectionForm a = connection_from_Phi(constant_frame(flat_sd_basis()), flat_metric(), Vec4(0.1, 0.2, 0.3, 0.4));
    CHECK(a.max_abs() < 1e-12);
    const auto zero_connection = [](const Vec4&) { return ConnectionForm{}; };
    for (const Form& r : curvature(zero_connection, Vec4::Zero())) CHECK(r.max_abs() == 0.0);
  }

  TEST_CASE("non-orthonormal frames are rejected") {
    std::array<Form, 3> scaled = flat_sd_basis();
    scaled[1] *= 1.5;
    CHECK_THROWS_AS(connection_from_Phi(constant_frame(scaled), flat_metric(), Vec4::Zero()), FrameNotOrthonormal);
  }

  TEST_CASE("Gibbons-Hawking triple: torsion free, hyperkahler blocks, equivariant") {
    const GHConfig cfg = GHConfig::canonical(2, 1.0);
    const Vec4 p(0.4, 1.1, -0.6, 0.3);
    const Patch patch = preferred_patch(cfg, p.head<3>());
    const FrameField frame = gh_triple_field(cfg, patch);
    const MetricField metric = gh_metric_field(cfg, patch);
    const FdScheme fd{1e-3, true};
    const ConnectionForm a = connection_from_Phi(frame, metric, p, fd);
    for (const Form& r : torsion_residual(frame, a, p, fd)) CHECK(r.max_abs() < 1e-8);
    CHECK((a - connection_levi_civita(frame, metric, p, fd)).max_abs() < 1e-8);

    const ConnectionField field = [&](const Vec4& y) { return connection_from_Phi(frame, metric, y, fd); };
    const auto R = curvature(field, p, FdScheme{1e-3, false});
    const Mat4 g = metric(p);
    const CurvatureBlock block = decompose(R, g, frame(p), asd_frame(g));
    CHECK(block.Rplus.cwiseAbs().maxCoeff() < 1e-5);
    CHECK(block.Rminus.cwiseAbs().maxCoeff() < 1e-5);
    CHECK(std::abs(block.scal) < 1e-5);

    // A constant SO3 rotation of the frame conjugates the connection.
    const Mat3 rot = Eigen::AngleAxisd(0.7, Vec3(0.2, -0.5, 0.8).normalized()).toRotationMatrix();
    const FrameField rotated = [&](const Vec4& y) {
      const auto f = frame(y);
      std::array<Form, 3> out;
      for (int i = 0; i < 3; ++i) {
        out[i] = Form(2);
        for (int j = 0; j < 3; ++j) out[i] += rot(j, i) * f[j];
      }
      return out;
    };
    const ConnectionForm b = connection_from_Phi(rotated, metric, p, fd);
    CHECK((b - a.rotated(rot)).max_abs() < 1e-10);
  }

  TEST_CASE("constant-curvature jet reproduces the round scalar curvature") {
    Tensor4 sphere;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) sphere(a, b, c, d) = (a == c) * (b == d) - (a == d) * (b == c);
    const Jet2 H = normal_jet(sphere);
    const RiemannData data = riemann_fd(polynomial_metric(H), Vec4::Zero(), FdScheme{1e-2, true});
    CHECK(scalar_curvature(data) == doctest::Approx(12.0).epsilon(1e-6));
    const CurvatureBlock block = block_from_riemann(data, flat_sd_basis(), flat_asd_basis());
    CHECK(block.scal == doctest::Approx(12.0).epsilon(1e-6));
    CHECK((block.Rplus + Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(block.Rminus.cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("Rminus is the trace-free Ricci tensor") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> n(0.0, 0.5);
      Jet2 H;
      for (double& v : H.h) v = n(rng);
      H.symmetrize();
      const Vec4 p(0.05, -0.03, 0.02, 0.04);
      const MetricField metric = polynomial_metric(H);
      const RiemannData data = riemann_fd(metric, p, FdScheme{1e-2, true});
      const Mat4 g = metric(p);
      const auto sd = sd_frame(g), asd = asd_frame(g);
      const CurvatureBlock block = block_from_riemann(data, sd, asd);
      const Mat4 ric = ricci(data);
      const Mat4 ric0 = ric - 0.25 * (g.inverse() * ric).trace() * g;
      CHECK((ric0_from_block(g, block.Rminus, sd, asd) - ric0).cwiseAbs().maxCoeff() < 1e-7);
      CHECK(block.scal == doctest::Approx(scalar_curvature(data)).epsilon(1e-9));
    }
  }

  TEST_CASE("Bianchi gauge operator") {
    const MetricField flat = flat_metric();
    const Vec4 p(0.3, -0.2, 0.5, 0.1);
    CHECK(bianchi_gauge(flat, [](const Vec4&) { return Mat4::Identity(); }, p).norm() < 1e-12);
    // h = f g with f linear: delta(f g) = -df and 1/2 d tr = 2 df.
    const Vec4 c(0.7, -1.2, 0.4, 2.0);
    const TensorField pure_trace = [c](const Vec4& x) { return Mat4(c.dot(x) * Mat4::Identity()); };
    CHECK((bianchi_gauge(flat, pure_trace, p) - c).norm() < 1e-10);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0.0, 1.0);
    Jet2 H;
    for (double& v : H.h) v = n(rng);
    H.symmetrize();
    const Jet2 projected = gauge_project(H);
    const TensorField h = [&projected](const Vec4& x) {
      Mat4 out = Mat4::Zero();
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) out(k, l) += projected(i, j, k, l) * x[i] * x[j];
      return out;
    };
    for (double scale : {0.5, 1.0, 2.0}) {
      const Vec4 x = scale * Vec4(0.3, -0.7, 0.2, 0.5);
      CHECK(bianchi_gauge(flat, h, x).norm() / x.norm() < 1e-8);
    }
  }

  TEST_CASE("first-order deformation: trivial input and gauge violation") {
    const ScalarField zero_lambda = [](const Vec4&) { return 0.0; };
    std::array<FormField, 3> zero_phi;
    for (int i = 0; i < 3; ++i)
      zero_phi[i] = FormField{2, [](const Vec4&) { return Form(2); }, Duality::anti_self_dual};
    const FirstOrder first = deformation_first_order(zero_lambda, zero_phi, Vec4(0.1, 0.2, 0.3, 0.4));
    CHECK(first.a1.max_abs() == 0.0);
    for (const Form& r : first.R1) CHECK(r.max_abs() == 0.0);

    std::array<FormField, 3> bad = zero_phi;
    bad[0] = FormField{2, [](const Vec4& x) { return x[1] * flat_asd_basis()[0]; }, Duality::anti_self_dual};
    CHECK_THROWS_AS(deformation_first_order(zero_lambda, bad, Vec4(0.1, 0.2, 0.3, 0.4)), GaugeViolation);

    const auto zero_connection = [](const Vec4&) { return ConnectionForm{}; };
    CHECK(ric0_second_order(zero_connection, zero_connection, Mat3::Zero(), Mat3::Zero(), Vec4::Zero()).cwiseAbs().maxCoeff() ==
          0.0);
  }

  TEST_CASE("Urbantke metric recovers a conformal class") {
    const Mat4 g = random_spd(3);
    const auto sd = sd_frame(g);
    const Mat4 rebuilt = urbantke_metric(sd);
    // Same conformal class: proportional matrices.
    const double ratio = rebuilt(0, 0) / g(0, 0);
    CHECK((rebuilt - ratio * g).cwiseAbs().maxCoeff() < 1e-10);
  }
}
