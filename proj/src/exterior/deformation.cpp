#include "ale/exterior/deformation.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace ale {

Background flat_background() {
  return {[](const Vec4&) { return Mat4::Identity().eval(); }, [](const Vec4&) { return flat_sd_basis(); }};
}

namespace {

std::array<FormField, 3> star_d_fields(const std::array<FormField, 3>& phi, const Background& bg,
                                       const FdScheme& fd) {
  std::array<FormField, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i] = FormField{1, [&phi, &bg, fd, i](const Vec4& x) { return hodge_star(bg.metric(x), fd_d(phi[i], x, fd)); }};
  }
  return out;
}

}  // namespace

Vec4 deformation_gauge(const ScalarField& lambda, const std::array<FormField, 3>& phi, const Vec4& p,
                       const FdScheme& fd, const Background& background) {
  const auto star_d = star_d_fields(phi, background, fd);
  const Mat4 g = background.metric(p);
  const auto omega = background.omega(p);
  Vec4 gauge = Vec4::Zero();
  for (int i = 0; i < 3; ++i) gauge += apply_J(g, omega[i], as_covector(star_d[i](p)));
  for (int a = 0; a < 4; ++a) gauge[a] += fd_partial(lambda, p, a, fd);
  return gauge;
}

FirstOrder deformation_first_order(const ScalarField& lambda, const std::array<FormField, 3>& phi,
                                   const Vec4& p, const FdScheme& fd, const Background& background,
                                   double gauge_tolerance) {
  FirstOrder out;
  out.gauge_residual = deformation_gauge(lambda, phi, p, fd, background).cwiseAbs().maxCoeff();
  if (out.gauge_residual > gauge_tolerance)
    throw GaugeViolation("gauge residual " + std::to_string(out.gauge_residual) + " exceeds tolerance");
  const auto star_d = star_d_fields(phi, background, fd);
  const Mat4 g = background.metric(p);
  const auto omega = background.omega(p);
  for (int i = 0; i < 3; ++i) {
    out.a1.a[i] = as_covector(star_d[i](p));
    out.R1[i] = fd_d(star_d[i], p, fd);
    for (int j = 0; j < 3; ++j) out.Rplus1(i, j) = 0.5 * inner(g, out.R1[i], omega[j]);
  }
  return out;
}

Mat3 ric0_second_order(const ConnectionField& a1, const ConnectionField& a2, const Mat3& phi,
                       const Mat3& Rplus1, const Vec4& p, const FdScheme& fd) {
  const auto& theta = flat_asd_basis();
  const Mat4 g = Mat4::Identity();
  const auto bracket = half_bracket(a1(p));
  Mat3 out = Rplus1 * phi;
  for (int i = 0; i < 3; ++i) {
    FormField component{1, [&a2, i](const Vec4& x) { return one_form(a2(x).a[i]); }};
    const Form da = fd_d(component, p, fd);
    for (int j = 0; j < 3; ++j) out(i, j) += 0.5 * inner(g, da + bracket[i], theta[j]);
  }
  return out;
}

Mat4 bianchi_operator(const std::array<FormField, 3>& phi, const Vec4& p, const FdScheme& fd,
                      const Background& background) {
  const Mat4 g = background.metric(p);
  const auto omega = background.omega(p);
  Mat4 out = Mat4::Zero();
  for (int i = 0; i < 3; ++i) {
    FormField codiff{1, [&phi, &background, fd, i](const Vec4& x) {
                       return fd_codifferential(phi[i], background.metric, x, fd);
                     }};
    const Form asd = split_sd(g, fd_d(codiff, p, fd)).asd;
    out += compose_forms(g, asd, omega[i]);
  }
  return out;
}

Mat4 urbantke_metric(const std::array<Form, 3>& sd) {
  static const auto levi_civita4 = [] {
    Tensor4 eps;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            const int idx[4] = {a, b, c, d};
            int sign = 1;
            for (int i = 0; i < 4; ++i)
              for (int j = i + 1; j < 4; ++j) {
                if (idx[i] == idx[j]) sign = 0;
                else if (idx[i] > idx[j]) sign = -sign;
              }
            eps(a, b, c, d) = sign;
          }
    return eps;
  }();
  std::array<Mat4, 3> w;
  for (int i = 0; i < 3; ++i) w[i] = as_matrix(sd[i]);
  Mat4 U = Mat4::Zero();
  const int cyc[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  const double sgn[6] = {1, 1, 1, -1, -1, -1};
  for (int s = 0; s < 6; ++s) {
    const Mat4& wi = w[cyc[s][0]];
    const Mat4& wj = w[cyc[s][1]];
    const Mat4& wk = w[cyc[s][2]];
    Mat4 dual = Mat4::Zero();  // dual(c, d) = eps^{cdef} wk_ef
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d)
        for (int e = 0; e < 4; ++e)
          for (int f = 0; f < 4; ++f) dual(c, d) += levi_civita4(c, d, e, f) * wk(e, f);
    U += sgn[s] * (wi * dual * wj.transpose());
  }
  U = 0.5 * (U + U.transpose()).eval();
  if (U(0, 0) < 0) U = -U;
  const double vol = wedge_top(sd[0], sd[0]) / 2.0;
  const double det = U.determinant();
  if (!(det > 0.0) || !(vol > 0.0)) throw SingularMetric("triple does not define a definite metric");
  return U * std::sqrt(vol / std::sqrt(det));
}

DeformationFamily::DeformationFamily(ScalarField lambda, PhiMatrixField phi)
    : lambda_(std::move(lambda)), phi_(std::move(phi)) {}

DeformationFamily::Frames DeformationFamily::frames(double t, const Vec4& x) const {
  Eigen::Matrix<double, 6, 6> generator = Eigen::Matrix<double, 6, 6>::Zero();
  const double lam = lambda_(x);
  const Mat3 ph = phi_(x);
  generator.topLeftCorner<3, 3>() = lam * Mat3::Identity();
  generator.bottomRightCorner<3, 3>() = lam * Mat3::Identity();
  generator.bottomLeftCorner<3, 3>() = -ph.transpose();
  generator.topRightCorner<3, 3>() = -ph;
  const Eigen::Matrix<double, 6, 6> flow = (t * generator).exp();
  const auto& omega = flat_sd_basis();
  const auto& theta = flat_asd_basis();
  Frames out;
  for (int col = 0; col < 6; ++col) {
    Form image(2);
    for (int r = 0; r < 3; ++r) image += flow(r, col) * omega[r] + flow(r + 3, col) * theta[r];
    if (col < 3) out.sd[col] = image;
    else out.asd[col - 3] = image;
  }
  return out;
}

Mat4 DeformationFamily::metric(double t, const Vec4& x) const { return urbantke_metric(frames(t, x).sd); }

ConnectionForm DeformationFamily::connection(double t, const Vec4& x, const FdScheme& fd) const {
  return connection_from_Phi([this, t](const Vec4& y) { return frames(t, y).sd; },
                             [this, t](const Vec4& y) { return metric(t, y); }, x, fd);
}

ConnectionForm DeformationFamily::connection_levi_civita(double t, const Vec4& x, const FdScheme& fd) const {
  return ale::connection_levi_civita([this, t](const Vec4& y) { return frames(t, y).sd; },
                                     [this, t](const Vec4& y) { return metric(t, y); }, x, fd);
}

CurvatureBlock DeformationFamily::curvature_block(double t, const Vec4& x, const FdScheme& fd) const {
  const RiemannData geo = riemann_fd([this, t](const Vec4& y) { return metric(t, y); }, x, fd);
  const Frames f = frames(t, x);
  return block_from_riemann(geo, f.sd, f.asd);
}

ConnectionForm DeformationFamily::order1(const Vec4& x, double dt, const FdScheme& fd) const {
  return (connection(dt, x, fd) - connection(-dt, x, fd)) * (0.5 / dt);
}

ConnectionForm DeformationFamily::order2(const Vec4& x, double dt, const FdScheme& fd) const {
  const ConnectionForm center = connection(0.0, x, fd);
  return (connection(dt, x, fd) + connection(-dt, x, fd) - center * 2.0) * (0.5 / (dt * dt));
}

Mat3 DeformationFamily::rminus_order2(const Vec4& x, double dt, const FdScheme& fd) const {
  const Mat3 plus = curvature_block(dt, x, fd).Rminus;
  const Mat3 minus = curvature_block(-dt, x, fd).Rminus;
  const Mat3 center = curvature_block(0.0, x, fd).Rminus;
  return (plus + minus - 2.0 * center) / (2.0 * dt * dt);
}

std::array<FormField, 3> DeformationFamily::phi_forms() const {
  std::array<FormField, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i] = FormField{2,
                       [ph = phi_, i](const Vec4& x) {
                         const Mat3 m = ph(x);
                         const auto& theta = flat_asd_basis();
                         return m(i, 0) * theta[0] + m(i, 1) * theta[1] + m(i, 2) * theta[2];
                       },
                       Duality::anti_self_dual, "phi"};
  }
  return out;
}

Mat4 DeformationFamily::first_order_metric(const Vec4& x) const {
  const auto phi = phi_forms();
  Mat4 out = lambda_(x) * Mat4::Identity();
  for (int i = 0; i < 3; ++i) out += compose_forms(Mat4::Identity(), phi[i](x), flat_sd_basis()[i]);
  return out;
}

}  // namespace ale
