#include "ale/exterior/connection.hpp"

#include <cmath>

namespace ale {

ConnectionForm ConnectionForm::rotated(const Mat3& rotation) const {
  ConnectionForm out;
  for (int i = 0; i < 3; ++i) {
    out.a[i].setZero();
    for (int j = 0; j < 3; ++j) out.a[i] += rotation(i, j) * a[j];
  }
  return out;
}

double ConnectionForm::max_abs() const {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

ConnectionForm operator+(const ConnectionForm& x, const ConnectionForm& y) {
  ConnectionForm out;
  for (int i = 0; i < 3; ++i) out.a[i] = x.a[i] + y.a[i];
  return out;
}
ConnectionForm operator-(const ConnectionForm& x, const ConnectionForm& y) {
  ConnectionForm out;
  for (int i = 0; i < 3; ++i) out.a[i] = x.a[i] - y.a[i];
  return out;
}
ConnectionForm operator*(const ConnectionForm& x, double s) {
  ConnectionForm out;
  for (int i = 0; i < 3; ++i) out.a[i] = x.a[i] * s;
  return out;
}

double frame_orthonormality_defect(const Mat4& metric, const std::array<Form, 3>& frame) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      worst = std::max(worst, std::abs(inner(metric, frame[i], frame[j]) - (i == j ? 2.0 : 0.0)));
  return worst;
}

ConnectionForm connection_from_Phi(const FrameField& frame, const MetricField& metric, const Vec4& p,
                                   const FdScheme& fd) {
  const Mat4 g = metric(p);
  const auto phi = frame(p);
  const double defect = frame_orthonormality_defect(g, phi);
  if (defect > 1e-8)
    throw FrameNotOrthonormal("frame deviates from <Phi_i, Phi_j> = 2 delta_ij by " + std::to_string(defect));
  std::array<Vec4, 3> codiff;
  for (int i = 0; i < 3; ++i) {
    FormField component{2, [&frame, i](const Vec4& x) { return frame(x)[i]; }};
    codiff[i] = as_covector(fd_codifferential(component, metric, p, fd));
  }
  ConnectionForm out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    out.a[i] = 0.5 * (codiff[i] + apply_J(g, phi[k], codiff[j]) - apply_J(g, phi[j], codiff[k]));
  }
  return out;
}

ConnectionForm connection_levi_civita(const FrameField& frame, const MetricField& metric, const Vec4& p,
                                      const FdScheme& fd) {
  const RiemannData geo = riemann_fd(metric, p, fd);
  const auto phi = frame(p);
  std::array<std::array<Mat4, 4>, 3> nabla;  // nabla[i][c] = (nabla_c Phi_i)_ab
  for (int c = 0; c < 4; ++c) {
    const auto diff = fd_partial([&frame](const Vec4& x) {
      const auto f = frame(x);
      Eigen::Matrix<double, 12, 4> stacked;
      for (int i = 0; i < 3; ++i) stacked.block<4, 4>(4 * i, 0) = as_matrix(f[i]);
      return stacked;
    }, p, c, fd);
    for (int i = 0; i < 3; ++i) {
      const Mat4 w = as_matrix(phi[i]);
      Mat4 cov = diff.block<4, 4>(4 * i, 0);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int e = 0; e < 4; ++e)
            cov(a, b) -= geo.christoffel(e, c, a) * w(e, b) + geo.christoffel(e, c, b) * w(a, e);
      nabla[i][c] = cov;
    }
  }
  auto project = [&](int from, int onto) {
    Vec4 v;
    for (int c = 0; c < 4; ++c) v[c] = 0.5 * inner(geo.g, two_form(nabla[from][c]), phi[onto]);
    return v;
  };
  ConnectionForm out;
  out.a[0] = project(1, 2);
  out.a[1] = -project(0, 2);
  out.a[2] = project(0, 1);
  return out;
}

std::array<Form, 3> torsion_residual(const FrameField& frame, const ConnectionForm& a, const Vec4& p,
                                     const FdScheme& fd) {
  const auto phi = frame(p);
  std::array<Form, 3> out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    FormField component{2, [&frame, i](const Vec4& x) { return frame(x)[i]; }};
    out[i] = fd_d(component, p, fd) - wedge(one_form(a.a[k]), phi[j]) + wedge(one_form(a.a[j]), phi[k]);
  }
  return out;
}

std::array<Form, 3> half_bracket(const ConnectionForm& a) {
  std::array<Form, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = wedge(one_form(a.a[(i + 1) % 3]), one_form(a.a[(i + 2) % 3]));
  return out;
}

std::array<Form, 3> curvature(const ConnectionField& a, const Vec4& p, const FdScheme& fd) {
  const auto bracket = half_bracket(a(p));
  std::array<Form, 3> out;
  for (int i = 0; i < 3; ++i) {
    FormField component{1, [&a, i](const Vec4& x) { return one_form(a(x).a[i]); }};
    out[i] = fd_d(component, p, fd) + bracket[i];
  }
  return out;
}

CurvatureBlock decompose(const std::array<Form, 3>& curvature_forms, const Mat4& metric,
                         const std::array<Form, 3>& sd, const std::array<Form, 3>& asd) {
  CurvatureBlock block;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      block.Rplus(i, j) = 0.5 * inner(metric, curvature_forms[i], sd[j]);
      block.Rminus(i, j) = 0.5 * inner(metric, curvature_forms[i], asd[j]);
    }
  block.scal = -4.0 * block.Rplus.trace();
  return block;
}

Vec4 bianchi_gauge(const MetricField& metric, const TensorField& h, const Vec4& p, const FdScheme& fd) {
  const RiemannData geo = riemann_fd(metric, p, fd);
  const Mat4 h0 = h(p);
  std::array<Mat4, 4> dh;
  for (int a = 0; a < 4; ++a) dh[a] = fd_partial(h, p, a, fd);
  Vec4 div = Vec4::Zero();
  for (int b = 0; b < 4; ++b) {
    double s = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        double cov = dh[a](c, b);
        for (int e = 0; e < 4; ++e)
          cov -= geo.christoffel(e, a, c) * h0(e, b) + geo.christoffel(e, a, b) * h0(c, e);
        s += geo.g_inv(a, c) * cov;
      }
    div[b] = -s;
  }
  auto trace = [&](const Vec4& x) { return (metric(x).inverse() * h(x)).trace(); };
  Vec4 dtrace;
  for (int a = 0; a < 4; ++a) dtrace[a] = fd_partial(trace, p, a, fd);
  return div + 0.5 * dtrace;
}

}  // namespace ale
