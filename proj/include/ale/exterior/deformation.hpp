#pragma once

#include "ale/exterior/connection.hpp"

namespace ale {

using ScalarField = std::function<double(const Vec4&)>;
// phi(omega_i) = sum_j phi_ij theta_j.
using PhiMatrixField = std::function<Mat3(const Vec4&)>;

// Hyperkahler background: metric plus parallel self-dual triple.
struct Background {
  MetricField metric;
  FrameField omega;
};
Background flat_background();

struct FirstOrder {
  ConnectionForm a1;          // a_i = *d phi_i
  std::array<Form, 3> R1;     // R_i = d * d phi_i
  Mat3 Rplus1 = Mat3::Zero(); // R1 components on omega_j
  double gauge_residual = 0.0;
};

FirstOrder deformation_first_order(const ScalarField& lambda, const std::array<FormField, 3>& phi,
                                   const Vec4& p, const FdScheme& fd = {},
                                   const Background& background = flat_background(),
                                   double gauge_tolerance = 1e-6);

// Gauge one-form sum_i J_i(*d phi_i) + d lambda.
Vec4 deformation_gauge(const ScalarField& lambda, const std::array<FormField, 3>& phi, const Vec4& p,
                       const FdScheme& fd = {}, const Background& background = flat_background());

// Anti-self-dual Ricci block at second order, components on the background theta_j:
// d_- a2 + 1/2 [a1, a1]_- + Rplus1 * phi.
Mat3 ric0_second_order(const ConnectionField& a1, const ConnectionField& a2, const Mat3& phi,
                       const Mat3& Rplus1, const Vec4& p, const FdScheme& fd = {});

// Linearized Einstein operator in Bianchi gauge on trace-free h = sum phi_i o omega_i:
// sum_i (d_- d_-^* phi_i) o omega_i.
Mat4 bianchi_operator(const std::array<FormField, 3>& phi, const Vec4& p, const FdScheme& fd = {},
                      const Background& background = flat_background());

// Metric whose self-dual forms are spanned by the given triple, normalized so that |Phi_1|^2 = 2.
Mat4 urbantke_metric(const std::array<Form, 3>& sd);

// Phi(v_i) = exp(t [[lambda, -phi], [-phi^T, lambda]]) applied to (omega, theta) on flat R^4.
class DeformationFamily {
 public:
  DeformationFamily(ScalarField lambda, PhiMatrixField phi);

  struct Frames {
    std::array<Form, 3> sd;
    std::array<Form, 3> asd;
  };
  Frames frames(double t, const Vec4& x) const;
  Mat4 metric(double t, const Vec4& x) const;
  ConnectionForm connection(double t, const Vec4& x, const FdScheme& fd = {}) const;
  ConnectionForm connection_levi_civita(double t, const Vec4& x, const FdScheme& fd = {}) const;
  CurvatureBlock curvature_block(double t, const Vec4& x, const FdScheme& fd = {}) const;

  // Taylor coefficients in t from symmetric differences with step dt.
  ConnectionForm order1(const Vec4& x, double dt, const FdScheme& fd = {}) const;
  ConnectionForm order2(const Vec4& x, double dt, const FdScheme& fd = {}) const;
  Mat3 rminus_order2(const Vec4& x, double dt, const FdScheme& fd = {}) const;

  std::array<FormField, 3> phi_forms() const;
  const ScalarField& lambda() const { return lambda_; }
  const PhiMatrixField& phi() const { return phi_; }
  // g^(1) = lambda g + sum phi_i o omega_i.
  Mat4 first_order_metric(const Vec4& x) const;

 private:
  ScalarField lambda_;
  PhiMatrixField phi_;
};

}  // namespace ale
