#include "ale/gh_space.hpp"

#include "ale/gauss.hpp"

#include <cmath>
#include <sstream>

namespace ale {

GHConfig GHConfig::canonical(int k, double lambda) {
  GHConfig c;
  c.k = k;
  c.lambda = lambda;
  c.centers = {{Vec3(-k * lambda, 0.0, 0.0), 1}, {Vec3(lambda, 0.0, 0.0), k}};
  c.validate();
  return c;
}

GHConfig GHConfig::single_center() {
  GHConfig c;
  c.k = 0;
  c.lambda = 1.0;
  c.centers = {{Vec3::Zero(), 1}};
  return c;
}

int GHConfig::total_multiplicity() const {
  int total = 0;
  for (const auto& c : centers) total += c.multiplicity;
  return total;
}

bool GHConfig::is_canonical_two_cluster() const {
  if (centers.size() != 2 || k < 1) return false;
  const double scale = std::max(1.0, std::abs(lambda) * k);
  return centers[0].multiplicity == 1 && centers[1].multiplicity == k &&
         (centers[0].position - Vec3(-k * lambda, 0, 0)).norm() <= 1e-12 * scale &&
         (centers[1].position - Vec3(lambda, 0, 0)).norm() <= 1e-12 * scale;
}

void GHConfig::validate() const {
  if (centers.empty()) throw ConfigError("configuration has no centers");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  Vec3 weighted = Vec3::Zero();
  double scale = 1.0;
  for (const auto& c : centers) {
    if (c.multiplicity < 1) throw ConfigError("center multiplicities must be positive");
    weighted += c.multiplicity * c.position;
    scale = std::max(scale, c.multiplicity * c.position.norm());
  }
  if (weighted.norm() > 1e-10 * scale) throw ConfigError("multiplicity-weighted center sum is not the origin");
  if (centers.size() > 1 && k < 1) throw ConfigError("k must be at least 1");
  if (centers.size() > 1 && total_multiplicity() != k + 1) throw ConfigError("total multiplicity must be k + 1");
}

namespace {

void check_centers(const GHConfig& config, const Vec3& x) {
  for (const auto& c : config.centers) {
    const double r = (x - c.position).norm();
    if (r < config.eps_center) {
      std::ostringstream msg;
      msg << "point at distance " << r << " from center (" << c.position.transpose() << ")";
      throw CenterTooClose(msg.str());
    }
  }
}

}  // namespace

double eval_V(const GHConfig& config, const Vec3& x) {
  check_centers(config, x);
  double v = 0.0;
  for (const auto& c : config.centers) v += 0.5 * c.multiplicity / (x - c.position).norm();
  return v;
}

Vec3 grad_V(const GHConfig& config, const Vec3& x) {
  check_centers(config, x);
  Vec3 g = Vec3::Zero();
  for (const auto& c : config.centers) {
    const Vec3 d = x - c.position;
    const double r = d.norm();
    g -= 0.5 * c.multiplicity * d / (r * r * r);
  }
  return g;
}

double string_distance(const GHConfig& config, const Vec3& x, Patch patch) {
  const double side = patch == Patch::north ? -1.0 : 1.0;
  double best = INFINITY;
  for (const auto& c : config.centers) {
    const Vec3 d = x - c.position;
    const double along = side * d[0];
    best = std::min(best, along >= 0.0 ? std::hypot(d[1], d[2]) : d.norm());
  }
  return best;
}

Patch preferred_patch(const GHConfig& config, const Vec3& x) {
  return string_distance(config, x, Patch::north) >= string_distance(config, x, Patch::south) ? Patch::north
                                                                                                : Patch::south;
}

Vec3 eval_eta(const GHConfig& config, const ChartPoint& p) {
  check_centers(config, p.base);
  if (string_distance(config, p.base, p.patch) < config.eps_string)
    throw OnDiracString(std::string("point lies on a Dirac string of the ") +
                        (p.patch == Patch::north ? "north" : "south") + " patch");
  Vec3 A = Vec3::Zero();
  for (const auto& c : config.centers) {
    const Vec3 d = p.base - c.position;
    const double r = d.norm();
    // 1/2 mult (cos - s) dphi with the removable 1/(u^2 + v^2) cancelled.
    const double coef = p.patch == Patch::north ? -0.5 * c.multiplicity / (r * (r + d[0]))
                                                : 0.5 * c.multiplicity / (r * (r - d[0]));
    A[1] += coef * (-d[2]);
    A[2] += coef * d[1];
  }
  return A;
}

Vec4 eta_covector(const GHConfig& config, const ChartPoint& p) {
  const Vec3 A = eval_eta(config, p);
  return Vec4(A[0], A[1], A[2], 1.0);
}

Mat4 gh_metric(const GHConfig& config, const ChartPoint& p) {
  const double V = eval_V(config, p.base);
  const Vec4 eta = eta_covector(config, p);
  Mat4 g = eta * eta.transpose() / V;
  g.topLeftCorner<3, 3>() += V * Mat3::Identity();
  return g;
}

std::array<Form, 3> gh_triple(const GHConfig& config, const ChartPoint& p) {
  const double V = eval_V(config, p.base);
  const Form eta = one_form(eta_covector(config, p));
  std::array<Form, 3> out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    out[i] = wedge(one_form(Vec4::Unit(i)), eta) + V * dx_wedge(j, k);
  }
  return out;
}

FrameSample metric_at(const GHConfig& config, const ChartPoint& p) {
  FrameSample s;
  s.point = p;
  const double V = eval_V(config, p.base);
  const Vec4 eta = eta_covector(config, p);
  s.coframe[0] = eta / std::sqrt(V);
  for (int a = 0; a < 3; ++a) s.coframe[1 + a] = std::sqrt(V) * Vec4::Unit(a);
  s.metric = gh_metric(config, p);
  s.triple = gh_triple(config, p);
  for (int i = 0; i < 3; ++i) s.J[i] = complex_structure(s.metric, s.triple[i]);
  return s;
}

MetricField gh_metric_field(const GHConfig& config, Patch patch) {
  return [config, patch](const Vec4& y) { return gh_metric(config, ChartPoint::from_coords(y, patch)); };
}

std::function<std::array<Form, 3>(const Vec4&)> gh_triple_field(const GHConfig& config, Patch patch) {
  return [config, patch](const Vec4& y) { return gh_triple(config, ChartPoint::from_coords(y, patch)); };
}

double moment_map(const GHConfig& config, const Vec3& x) {
  double m = 0.0;
  for (const auto& c : config.centers) m += c.multiplicity * (x - c.position).norm();
  return m;
}

Vec3 grad_moment_map(const GHConfig& config, const Vec3& x) {
  check_centers(config, x);
  Vec3 g = Vec3::Zero();
  for (const auto& c : config.centers) {
    const Vec3 d = x - c.position;
    g += c.multiplicity * d / d.norm();
  }
  return g;
}

Vec4 J_dm(const GHConfig& config, const ChartPoint& p, int i) {
  const Vec3 dm3 = grad_moment_map(config, p.base);
  const Vec4 dm(dm3[0], dm3[1], dm3[2], 0.0);
  return apply_J(gh_metric(config, p), gh_triple(config, p)[i], dm);
}

Vec4 xi_field(const GHConfig& config, const ChartPoint& p) {
  return gh_metric(config, p).ldlt().solve(J_dm(config, p, 0));
}

double sigma_integrate(const GHConfig& config, const std::function<double(double)>& f, int order) {
  if (!config.is_canonical_two_cluster())
    throw ConfigError("sigma integration needs the canonical two-cluster configuration");
  for (double end : {config.segment_begin(), config.segment_end()}) {
    if (!std::isfinite(f(end))) {
      std::ostringstream msg;
      msg << "integrand is singular at the segment end x1 = " << end;
      throw QuadratureDivergence(msg.str());
    }
  }
  const GaussRule rule = gauss_legendre(order, config.segment_begin(), config.segment_end());
  std::vector<double> terms(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrand is not finite at x1 = " << rule.nodes[i];
      throw QuadratureDivergence(msg.str());
    }
    terms[i] = rule.weights[i] * v;
  }
  return 2.0 * M_PI * pairwise_sum(terms);
}

double vol_sigma(const GHConfig& config, int order) {
  return sigma_integrate(config, [](double) { return 1.0; }, order);
}

GHConfig flat_model(const GHConfig& config) {
  GHConfig model = config;
  model.centers = {{Vec3::Zero(), config.total_multiplicity()}};
  return model;
}

double model_radius(const GHConfig& config, const Vec3& x) {
  return std::sqrt(2.0 * config.total_multiplicity() * x.norm());
}

}  // namespace ale
