#pragma once

#include "ale/exterior/riemann.hpp"

namespace ale {

using FrameField = std::function<std::array<Form, 3>(const Vec4&)>;

// a = sum a_i (x) v_i on the bundle of self-dual forms.
struct ConnectionForm {
  std::array<Vec4, 3> a{Vec4::Zero(), Vec4::Zero(), Vec4::Zero()};

  ConnectionForm rotated(const Mat3& rotation) const;
  double max_abs() const;
};

ConnectionForm operator+(const ConnectionForm& x, const ConnectionForm& y);
ConnectionForm operator-(const ConnectionForm& x, const ConnectionForm& y);
ConnectionForm operator*(const ConnectionForm& x, double s);

using ConnectionField = std::function<ConnectionForm(const Vec4&)>;

double frame_orthonormality_defect(const Mat4& metric, const std::array<Form, 3>& frame);

// Torsion-free metric connection of the frame Phi, from the codifferentials of Phi_i.
ConnectionForm connection_from_Phi(const FrameField& frame, const MetricField& metric, const Vec4& p,
                                   const FdScheme& fd = {});

// Same connection read off the Levi-Civita derivative: a_1 = <nabla Phi_2, Phi_3>/2 and cyclic.
ConnectionForm connection_levi_civita(const FrameField& frame, const MetricField& metric, const Vec4& p,
                                      const FdScheme& fd = {});

// dPhi_i - a_k ^ Phi_j + a_j ^ Phi_k for cyclic (i, j, k).
std::array<Form, 3> torsion_residual(const FrameField& frame, const ConnectionForm& a, const Vec4& p,
                                     const FdScheme& fd = {});

// R_i = da_i + a_j ^ a_k.
std::array<Form, 3> curvature(const ConnectionField& a, const Vec4& p, const FdScheme& fd = {});
// 1/2 [a, a] in components: a_j ^ a_k.
std::array<Form, 3> half_bracket(const ConnectionForm& a);

CurvatureBlock decompose(const std::array<Form, 3>& curvature_forms, const Mat4& metric,
                         const std::array<Form, 3>& sd, const std::array<Form, 3>& asd);

using TensorField = std::function<Mat4(const Vec4&)>;

// delta_g h + 1/2 d tr_g h, with delta h_b = -g^ac nabla_a h_cb.
Vec4 bianchi_gauge(const MetricField& metric, const TensorField& h, const Vec4& p, const FdScheme& fd = {});

}  // namespace ale
