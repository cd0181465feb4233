#include "ale/exterior/riemann.hpp"

#include <cmath>

namespace ale {

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

namespace {

MetricJet jet_central(const MetricField& metric, const Vec4& p, double h) {
  MetricJet jet;
  jet.g = metric(p);
  std::array<Mat4, 4> plus, minus;
  for (int a = 0; a < 4; ++a) {
    Vec4 up = p, down = p;
    up[a] += h;
    down[a] -= h;
    plus[a] = metric(up);
    minus[a] = metric(down);
  }
  for (int c = 0; c < 4; ++c) {
    const Mat4 first = (plus[c] - minus[c]) / (2.0 * h);
    const Mat4 pure = (plus[c] - 2.0 * jet.g + minus[c]) / (h * h);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        jet.first(c, a, b) = first(a, b);
        jet.second(c, c, a, b) = pure(a, b);
      }
    for (int d = c + 1; d < 4; ++d) {
      Vec4 pp = p, pm = p, mp = p, mm = p;
      pp[c] += h, pp[d] += h;
      pm[c] += h, pm[d] -= h;
      mp[c] -= h, mp[d] += h;
      mm[c] -= h, mm[d] -= h;
      const Mat4 mixed = (metric(pp) - metric(pm) - metric(mp) + metric(mm)) / (4.0 * h * h);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) jet.second(c, d, a, b) = jet.second(d, c, a, b) = mixed(a, b);
    }
  }
  return jet;
}

}  // namespace

MetricJet metric_jet_fd(const MetricField& metric, const Vec4& p, const FdScheme& fd) {
  try {
    if (!fd.richardson) return jet_central(metric, p, fd.h);
    const MetricJet coarse = jet_central(metric, p, fd.h);
    MetricJet out = jet_central(metric, p, 0.5 * fd.h);
    for (std::size_t i = 0; i < 64; ++i) out.first.v[i] = (4.0 * out.first.v[i] - coarse.first.v[i]) / 3.0;
    for (std::size_t i = 0; i < 256; ++i)
      out.second.v[i] = (4.0 * out.second.v[i] - coarse.second.v[i]) / 3.0;
    return out;
  } catch (const CenterTooClose& e) {
    throw EvaluationDomain(std::string("metric stencil left the chart: ") + e.what());
  } catch (const OnDiracString& e) {
    throw EvaluationDomain(std::string("metric stencil left the chart: ") + e.what());
  }
}

RiemannData riemann_from_jet(const MetricJet& jet) {
  RiemannData out;
  out.g = jet.g;
  if (!(jet.g.determinant() > 0.0)) throw SingularMetric("metric is not positive definite");
  out.g_inv = jet.g.inverse();
  Tensor3 lowered;  // Gamma_abc = 1/2 (g_ab,c + g_ac,b - g_bc,a)
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        lowered(a, b, c) = 0.5 * (jet.first(c, a, b) + jet.first(b, a, c) - jet.first(a, b, c));
  for (int e = 0; e < 4; ++e)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        for (int a = 0; a < 4; ++a) s += out.g_inv(e, a) * lowered(a, b, c);
        out.christoffel(e, b, c) = s;
      }
  const auto& d2 = jet.second;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double r = 0.5 * (d2(b, c, a, d) + d2(a, d, b, c) - d2(b, d, a, c) - d2(a, c, b, d));
          for (int e = 0; e < 4; ++e)
            r += lowered(e, b, c) * out.christoffel(e, a, d) - lowered(e, b, d) * out.christoffel(e, a, c);
          out.riemann(a, b, c, d) = r;
        }
  return out;
}

RiemannData riemann_fd(const MetricField& metric, const Vec4& p, const FdScheme& fd) {
  return riemann_from_jet(metric_jet_fd(metric, p, fd));
}

Mat4 ricci(const RiemannData& data) {
  Mat4 ric = Mat4::Zero();
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) s += data.g_inv(a, c) * data.riemann(a, b, c, d);
      ric(b, d) = s;
    }
  return ric;
}

double laplacian(const MetricField& metric, const std::function<double(const Vec4&)>& u, const Vec4& p,
                 const FdScheme& fd) {
  auto flux = [&](const Vec4& x) {
    const Mat4 g = metric(x);
    Vec4 du;
    for (int b = 0; b < 4; ++b) du[b] = fd_partial(u, x, b, fd);
    return Vec4(std::sqrt(g.determinant()) * g.ldlt().solve(du));
  };
  double div = 0.0;
  for (int a = 0; a < 4; ++a) div += fd_partial(flux, p, a, fd)[a];
  return div / std::sqrt(metric(p).determinant());
}

double scalar_curvature(const RiemannData& data) { return (data.g_inv * ricci(data)).trace(); }

Form curvature_operator(const RiemannData& data, const Form& two) {
  const Mat4 raised = data.g_inv * as_matrix(two) * data.g_inv.transpose();
  Mat4 out = Mat4::Zero();
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 4; ++d) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += data.riemann(a, b, c, d) * raised(a, b);
      out(c, d) = 0.5 * s;
    }
  return two_form(out);
}

CurvatureBlock block_from_riemann(const RiemannData& data, const std::array<Form, 3>& sd,
                                  const std::array<Form, 3>& asd) {
  CurvatureBlock block;
  for (int j = 0; j < 3; ++j) {
    const Form image_sd = curvature_operator(data, sd[j]);
    const Form image_asd = curvature_operator(data, asd[j]);
    for (int i = 0; i < 3; ++i) {
      block.Rplus(i, j) = -0.5 * inner(data.g, image_sd, sd[i]);
      block.Rminus(i, j) = -0.5 * inner(data.g, image_asd, sd[i]);
    }
  }
  block.scal = -4.0 * block.Rplus.trace();
  return block;
}

Mat4 compose_forms(const Mat4& metric, const Form& asd, const Form& sd) {
  return as_matrix(asd) * metric.inverse() * as_matrix(sd);
}

Mat4 ric0_from_block(const Mat4& metric, const Mat3& Rminus, const std::array<Form, 3>& sd,
                     const std::array<Form, 3>& asd) {
  Mat4 out = Mat4::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out += Rminus(i, j) * compose_forms(metric, asd[j], sd[i]);
  return out;
}

}  // namespace ale
