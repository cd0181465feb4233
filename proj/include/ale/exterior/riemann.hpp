#pragma once

#include "ale/exterior/forms.hpp"

namespace ale {

struct Tensor3 {
  std::array<double, 64> v{};
  double& operator()(int a, int b, int c) { return v[static_cast<std::size_t>(16 * a + 4 * b + c)]; }
  double operator()(int a, int b, int c) const { return v[static_cast<std::size_t>(16 * a + 4 * b + c)]; }
};

struct Tensor4 {
  std::array<double, 256> v{};
  double& operator()(int a, int b, int c, int d) {
    return v[static_cast<std::size_t>(64 * a + 16 * b + 4 * c + d)];
  }
  double operator()(int a, int b, int c, int d) const {
    return v[static_cast<std::size_t>(64 * a + 16 * b + 4 * c + d)];
  }
  double max_abs() const;
};

// Metric with first and second coordinate derivatives at a point:
// first(c, a, b) = d_c g_ab, second(c, d, a, b) = d_c d_d g_ab.
struct MetricJet {
  Mat4 g = Mat4::Identity();
  Tensor3 first;
  Tensor4 second;
};

MetricJet metric_jet_fd(const MetricField& metric, const Vec4& p, const FdScheme& fd = {});

struct RiemannData {
  Mat4 g = Mat4::Identity();
  Mat4 g_inv = Mat4::Identity();
  Tensor3 christoffel;  // Gamma^a_bc
  Tensor4 riemann;      // R_abcd, R_0101 = +1 on the unit sphere
};

RiemannData riemann_from_jet(const MetricJet& jet);
RiemannData riemann_fd(const MetricField& metric, const Vec4& p, const FdScheme& fd = {});

Mat4 ricci(const RiemannData& data);
// Laplace-Beltrami of a scalar, (1/sqrt g) d_a (sqrt g g^ab d_b u).
double laplacian(const MetricField& metric, const std::function<double(const Vec4&)>& u, const Vec4& p,
                 const FdScheme& fd = {});
double scalar_curvature(const RiemannData& data);
// Curvature operator on 2-forms, (R alpha)_cd = 1/2 R_abcd alpha^ab (identity on the unit sphere).
Form curvature_operator(const RiemannData& data, const Form& two);

// Curvature operator blocks in the bundle-curvature sign R = -(curvature operator),
// components taken against frames normalized to <.,.> = 2.
struct CurvatureBlock {
  Mat3 Rplus = Mat3::Zero();
  Mat3 Rminus = Mat3::Zero();
  double scal = 0.0;
  std::string convention = "R = -curvature operator; <omega_i, omega_j> = 2 delta_ij";
};

CurvatureBlock block_from_riemann(const RiemannData& data, const std::array<Form, 3>& sd,
                                  const std::array<Form, 3>& asd);

// Symmetric endomorphism u_- o u_+ lowered with the metric.
Mat4 compose_forms(const Mat4& metric, const Form& asd, const Form& sd);
// Trace-free Ricci rebuilt from the mixed block.
Mat4 ric0_from_block(const Mat4& metric, const Mat3& Rminus, const std::array<Form, 3>& sd,
                     const std::array<Form, 3>& asd);

}  // namespace ale
