#include "ale/l2_harmonic.hpp"

#include <cmath>

namespace ale {
namespace {

struct PotentialRatio {
  double value;
  Vec3 gradient;
};

// f = V0 / V with V0 the potential of the first center.
PotentialRatio potential_ratio(const GHConfig& config, const Vec3& x) {
  const Center& c0 = config.centers.front();
  const Vec3 d0 = x - c0.position;
  const double r0 = d0.norm();
  const double v0 = 0.5 * c0.multiplicity / r0;
  const Vec3 grad_v0 = -0.5 * c0.multiplicity * d0 / (r0 * r0 * r0);
  const double v = eval_V(config, x);
  const Vec3 grad_v = grad_V(config, x);
  return {v0 / v, (grad_v0 * v - v0 * grad_v) / (v * v)};
}

Form unnormalized_omega(const GHConfig& config, const ChartPoint& p) {
  const PotentialRatio f = potential_ratio(config, p.base);
  const double V = eval_V(config, p.base);
  const Form eta = one_form(eta_covector(config, p));
  Form out(2);
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    out += f.gradient[a] * (wedge(one_form(Vec4::Unit(a)), eta) - V * dx_wedge(b, c));
  }
  return out;
}

Mat4 orthonormal_components(const Mat4& metric, const Mat4& two) {
  const Eigen::LLT<Mat4> llt(metric);
  const Mat4 L = llt.matrixL();
  const Mat4 Linv = L.inverse();
  return Linv * two * Linv.transpose();
}

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

Form HarmonicFormBundle::omega_at(const ChartPoint& p) const { return normalization * unnormalized_omega(config, p); }

FormField HarmonicFormBundle::omega_field(Patch patch) const {
  return FormField{2, [bundle = *this, patch](const Vec4& y) { return bundle.omega_at(ChartPoint::from_coords(y, patch)); },
                   Duality::anti_self_dual, "Omega"};
}

double HarmonicFormBundle::sigma_integral(int order) const {
  // On the segment V0 / V = b / (b + k a) with a = x1 - x1(p0), b = x1(p1) - x1, smooth up to the ends.
  const double k = config.k, lo = config.segment_begin(), hi = config.segment_end();
  return normalization * sigma_integrate(
                             config,
                             [=](double x1) {
                               const double a = x1 - lo, b = hi - x1;
                               return -k * (a + b) / ((b + k * a) * (b + k * a));
                             },
                             order);
}

HarmonicFormBundle build_Omega(const GHConfig& config) {
  config.validate();
  if (!config.is_canonical_two_cluster()) throw ConfigError("Omega is built for the canonical two-cluster layout");
  HarmonicFormBundle bundle;
  bundle.config = config;
  bundle.sigma_self_intersection = -static_cast<double>(config.k + 1) / config.k;
  bundle.normalization = 1.0;
  const double raw = bundle.sigma_integral();
  if (!std::isfinite(raw) || std::abs(raw) < 1e-12)
    throw NormalizationFailure("int_Sigma of the unnormalized form is degenerate");
  bundle.normalization = 2.0 * M_PI * bundle.sigma_self_intersection / raw;
  return bundle;
}

NormResult omega_norm(const HarmonicFormBundle& bundle, const NormOptions& options) {
  const GHConfig& cfg = bundle.config;
  NormResult out;
  out.r_out = options.r_out_factor * (cfg.k + 1) * cfg.lambda;
  VolumeRegion region;
  region.kind = VolumeRegion::Kind::spheroid;
  region.focus_begin = cfg.segment_begin();
  region.focus_end = cfg.segment_end();
  region.semi_major = out.r_out;
  region.spheroid_panels = options.panels;
  const double scale2 = options.scale * options.scale;
  out.interior = integrate_volume(
      cfg,
      [&](const ChartPoint& p) {
        const Form w = bundle.omega_at(p);
        return scale2 * inner(gh_metric(cfg, p), w, w);
      },
      region, options.spec);
  // Leading profile 4 c_Gamma r^-4 (dr ^ J1 dr - J2 dr ^ J3 dr) has |.|^2 = 32 c_Gamma^2 / r^8 on S^3 / Z_{k+1}.
  const double c_gamma = (cfg.k + 1) * cfg.lambda * (cfg.k + 1);
  const double r_model = std::sqrt(2.0 * (cfg.k + 1) * out.r_out);
  out.tail = scale2 * 16.0 * M_PI * M_PI * c_gamma * c_gamma / ((cfg.k + 1) * std::pow(r_model, 4));
  out.value = out.interior + out.tail;
  out.tail_fraction = out.tail / out.value;
  if (out.tail_fraction > options.tail_limit)
    throw TailDominance("tail contributes " + std::to_string(out.tail_fraction) + " of the norm");
  return out;
}

double s_ratio(const HarmonicFormBundle& bundle) {
  return vol_sigma(bundle.config, 48) / bundle.sigma_integral(48);
}

AlphaSplitReport alpha_split_check(const HarmonicFormBundle& bundle, const std::vector<ChartPoint>& points,
                                   const FdScheme& fd) {
  const GHConfig& cfg = bundle.config;
  const double s = s_ratio(bundle);
  AlphaSplitReport report;
  report.points = points.size();
  struct Residuals {
    double plus, minus, d_minus;
  };
  const auto per_point = parallel_map<Residuals>(points.size(), [&](std::size_t n) {
    const Patch patch = points[n].patch;
    const MetricField metric = gh_metric_field(cfg, patch);
    auto alpha = [&cfg, patch, fd](const Vec4& y) {
      FormField jdm{1, [&cfg, patch](const Vec4& z) { return one_form(J_dm(cfg, ChartPoint::from_coords(z, patch), 0)); }};
      return -0.5 * fd_d(jdm, y, fd);
    };
    const Vec4 y = points[n].coords();
    const SdSplit parts = split_sd(metric(y), alpha(y));
    const Form plus = parts.sd + gh_triple(cfg, points[n])[0];
    const Form minus = parts.asd - s * bundle.omega_at(points[n]);
    FormField asd_part{2, [&](const Vec4& z) { return split_sd(metric(z), alpha(z)).asd; }};
    return Residuals{plus.max_abs(), minus.max_abs(), fd_d(asd_part, y, fd).max_abs()};
  });
  for (const auto& r : per_point) {
    report.plus_residual = std::max(report.plus_residual, r.plus);
    report.minus_residual = std::max(report.minus_residual, r.minus);
    report.d_minus_residual = std::max(report.d_minus_residual, r.d_minus);
  }
  return report;
}

std::vector<ChartPoint> far_field_points(const GHConfig& config, double r) {
  const double rho = r * r / (2.0 * config.total_multiplicity());
  static const double cosines[] = {-0.7, -0.3, 0.3, 0.7};
  static const double azimuths[] = {0.4, 2.1, 3.9};
  std::vector<ChartPoint> out;
  for (double c : cosines)
    for (double phi : azimuths) {
      const double s = std::sqrt(1.0 - c * c);
      const Vec3 x = rho * Vec3(c, s * std::cos(phi), s * std::sin(phi));
      out.push_back({x, 0.3, preferred_patch(config, x)});
    }
  return out;
}

double leading_profile_error(const HarmonicFormBundle& bundle, double r) {
  const GHConfig& cfg = bundle.config;
  const double c_gamma = (cfg.k + 1) * vol_sigma(cfg) / (2.0 * M_PI);
  double worst = 0.0;
  for (const ChartPoint& p : far_field_points(cfg, r)) {
    const Mat4 g = gh_metric(cfg, p);
    const auto triple = gh_triple(cfg, p);
    const double rho = p.base.norm();
    const double rr = model_radius(cfg, p.base);
    const Vec4 dr = (cfg.k + 1) / rr * Vec4(p.base[0] / rho, p.base[1] / rho, p.base[2] / rho, 0.0);
    auto J = [&](int i) { return one_form(apply_J(g, triple[i], dr)); };
    const Form profile = 4.0 * c_gamma / std::pow(rr, 4) * (wedge(one_form(dr), J(0)) - wedge(J(1), J(2)));
    const Mat4 diff = orthonormal_components(g, as_matrix(bundle.omega_at(p) - profile));
    worst = std::max(worst, max_abs(diff) / max_abs(orthonormal_components(g, as_matrix(profile))));
  }
  return worst;
}

double metric_deviation(const GHConfig& config, double r) {
  const GHConfig model = flat_model(config);
  double worst = 0.0;
  for (const ChartPoint& p : far_field_points(config, r)) {
    const Mat4 g_model = gh_metric(model, p);
    worst = std::max(worst, max_abs(orthonormal_components(g_model, gh_metric(config, p) - g_model)));
  }
  return worst;
}

double moment_deviation(const GHConfig& config, double r) {
  double worst = 0.0;
  for (const ChartPoint& p : far_field_points(config, r)) {
    const double rr = model_radius(config, p.base);
    worst = std::max(worst, std::abs(moment_map(config, p.base) - 0.5 * rr * rr));
  }
  return worst;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) throw FitUnstable("slope fit needs at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw FitUnstable("degenerate abscissae in slope fit");
  return (n * sxy - sx * sy) / denom;
}

namespace {

using AxialPotential = std::function<double(const Vec3&)>;

// dd^C u = d(J_1 du) for a fiber-invariant u, nested central differences at relative step.
Form ddc(const GHConfig& cfg, const AxialPotential& u, const ChartPoint& p) {
  const double h = 1e-3 * p.base.norm();
  const FdScheme fd{h, false};
  const Patch patch = p.patch;
  FormField jdu{1, [&](const Vec4& y) {
                  const ChartPoint q = ChartPoint::from_coords(y, patch);
                  Vec4 du = Vec4::Zero();
                  for (int a = 0; a < 3; ++a) du[a] = fd_partial([&](const Vec4& z) { return u(z.head<3>()); }, y, a, fd);
                  return one_form(apply_J(gh_metric(cfg, q), gh_triple(cfg, q)[0], du));
                }};
  return fd_d(jdu, p.coords(), fd);
}

struct FitRows {
  Eigen::MatrixXd design;
  Eigen::VectorXd target;
};

FitRows fit_rows(const HarmonicFormBundle& bundle, const std::vector<ChartPoint>& points) {
  const GHConfig& cfg = bundle.config;
  const double kp1 = cfg.k + 1;
  const double scale = kp1 * cfg.lambda;
  const std::array<AxialPotential, 3> basis = {
      [kp1](const Vec3& x) { return 1.0 / (2.0 * kp1 * x.norm()); },
      [kp1](const Vec3& x) { return x[0] / (4.0 * kp1 * kp1 * std::pow(x.norm(), 3)); },
      [scale](const Vec3& x) {
        const double rho = x.norm(), c = x[0] / rho;
        return scale * scale * scale * 0.5 * (3.0 * c * c - 1.0) / std::pow(rho, 3);
      }};
  FitRows rows;
  rows.design.resize(static_cast<long>(6 * points.size()), 3);
  rows.target.resize(static_cast<long>(6 * points.size()));
  const auto blocks = parallel_map<Eigen::Matrix<double, 6, 4>>(points.size(), [&](std::size_t n) {
    const ChartPoint& p = points[n];
    const Mat4 g = gh_metric(cfg, p);
    const double r4 = std::pow(model_radius(cfg, p.base), 4);
    Eigen::Matrix<double, 6, 4> block;
    auto fill = [&](int col, const Form& w) {
      const Form on = two_form(orthonormal_components(g, as_matrix(w)));
      for (int s = 0; s < 6; ++s) block(s, col) = r4 * on[s];
    };
    for (int b = 0; b < 3; ++b) fill(b, ddc(cfg, basis[b], p));
    fill(3, bundle.omega_at(p));
    return block;
  });
  for (std::size_t n = 0; n < points.size(); ++n) {
    rows.design.middleRows(static_cast<long>(6 * n), 6) = blocks[n].leftCols(3);
    rows.target.segment(static_cast<long>(6 * n), 6) = blocks[n].col(3);
  }
  return rows;
}

Eigen::Vector3d solve_fit(const FitRows& rows, double* condition) {
  Eigen::Vector3d norms = rows.design.colwise().norm().transpose();
  for (int i = 0; i < 3; ++i)
    if (!(norms[i] > 0.0)) norms[i] = 1.0;
  const Eigen::MatrixXd scaled = rows.design * norms.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (condition) *condition = sv[0] / sv[sv.size() - 1];
  return svd.solve(rows.target).cwiseQuotient(norms);
}

}  // namespace

AsymptoticFit asymptotic_fit(const HarmonicFormBundle& bundle, const std::vector<double>& radii,
                             double condition_limit) {
  const GHConfig& cfg = bundle.config;
  if (radii.empty()) throw FitUnstable("no radii supplied");
  AsymptoticFit fit;
  fit.radii = radii;
  std::vector<ChartPoint> all;
  std::vector<double> omega_max, density_max, metric_dev, moment_dev;
  for (double r : radii) {
    const auto pts = far_field_points(cfg, r);
    all.insert(all.end(), pts.begin(), pts.end());
    double cond = 0.0;
    const Eigen::Vector3d local = solve_fit(fit_rows(bundle, pts), &cond);
    fit.c_gamma_by_radius.push_back(local[0]);
    fit.a1_by_radius.push_back(local[1]);
    double wmax = 0.0, dmax = 0.0;
    for (const auto& p : pts) {
      const Mat4 g = gh_metric(cfg, p);
      const Form w = bundle.omega_at(p);
      wmax = std::max(wmax, max_abs(orthonormal_components(g, as_matrix(w))));
      dmax = std::max(dmax, inner(g, w, w));
    }
    omega_max.push_back(wmax);
    density_max.push_back(dmax);
    metric_dev.push_back(metric_deviation(cfg, r));
    moment_dev.push_back(moment_deviation(cfg, r));
  }
  const Eigen::Vector3d coeffs = solve_fit(fit_rows(bundle, all), &fit.condition);
  if (!(fit.condition < condition_limit))
    throw FitUnstable("asymptotic fit condition number " + std::to_string(fit.condition) + " exceeds limit");
  fit.c_gamma = coeffs[0];
  fit.a1 = coeffs[1];
  fit.next_coefficient = coeffs[2];
  if (radii.size() >= 2) {
    fit.omega_exponent = log_log_slope(radii, omega_max);
    fit.density_exponent = log_log_slope(radii, density_max);
    fit.metric_exponent = log_log_slope(radii, metric_dev);
    fit.moment_exponent = log_log_slope(radii, moment_dev);
  }
  return fit;
}

double harmonic_phi1(const GHConfig& config, const ChartPoint& p) { return 2.0 * (config.k + 1) * p.base[0]; }

}  // namespace ale
