#pragma once

#include "ale/exterior/forms.hpp"

namespace ale {

enum class Patch { north, south };
enum class OrientationConvention { omega_self_dual };

struct Center {
  Vec3 position = Vec3::Zero();
  int multiplicity = 1;
};

// Gibbons-Hawking data: V = 1/2 sum_i mult_i / |x - p_i|, fiber period 2 pi.
struct GHConfig {
  int k = 1;
  double lambda = 1.0;
  std::vector<Center> centers;
  OrientationConvention orientation = OrientationConvention::omega_self_dual;
  double eps_center = 1e-6;
  double eps_string = 1e-6;

  // p0 = (-k lambda, 0, 0) with multiplicity 1, p1 = (lambda, 0, 0) with multiplicity k.
  static GHConfig canonical(int k, double lambda);
  // One unit center at the origin: flat R^4.
  static GHConfig single_center();

  void validate() const;
  int total_multiplicity() const;
  bool is_canonical_two_cluster() const;
  double segment_begin() const { return -k * lambda; }
  double segment_end() const { return lambda; }
};

// Chart point (x1, x2, x3, theta); coordinate index 3 is the fiber angle.
struct ChartPoint {
  Vec3 base = Vec3::Zero();
  double fiber_angle = 0.0;
  Patch patch = Patch::north;

  Vec4 coords() const { return Vec4(base[0], base[1], base[2], fiber_angle); }
  static ChartPoint from_coords(const Vec4& y, Patch patch) { return {y.head<3>(), y[3], patch}; }
};

struct FrameSample {
  ChartPoint point;
  std::array<Vec4, 4> coframe;  // e0 = V^{-1/2} eta, e_a = V^{1/2} dx^a
  Mat4 metric;
  std::array<Form, 3> triple;
  std::array<Mat4, 3> J;
};

double eval_V(const GHConfig& config, const Vec3& x);
Vec3 grad_V(const GHConfig& config, const Vec3& x);
// Connection coefficients A_a in eta = d theta + A_a dx^a for the point's patch.
Vec3 eval_eta(const GHConfig& config, const ChartPoint& p);
// eta as a covector on the chart.
Vec4 eta_covector(const GHConfig& config, const ChartPoint& p);
// Distance from x to the Dirac strings of a patch.
double string_distance(const GHConfig& config, const Vec3& x, Patch patch);
// Patch whose strings are farthest from x.
Patch preferred_patch(const GHConfig& config, const Vec3& x);

Mat4 gh_metric(const GHConfig& config, const ChartPoint& p);
std::array<Form, 3> gh_triple(const GHConfig& config, const ChartPoint& p);
FrameSample metric_at(const GHConfig& config, const ChartPoint& p);

// Chart-coordinate fields for a fixed patch, for finite differences.
MetricField gh_metric_field(const GHConfig& config, Patch patch);
std::function<std::array<Form, 3>(const Vec4&)> gh_triple_field(const GHConfig& config, Patch patch);

double moment_map(const GHConfig& config, const Vec3& x);
Vec3 grad_moment_map(const GHConfig& config, const Vec3& x);
// J_i dm as a covector (J_1 dx^1 = eta / V, J_1 dx^2 = dx^3).
Vec4 J_dm(const GHConfig& config, const ChartPoint& p, int i);
// Metric dual of J_1 dm.
Vec4 xi_field(const GHConfig& config, const ChartPoint& p);

// int_Sigma f omega_1 = 2 pi int f(x1) dx1 over the segment, Gauss-Legendre of the given order.
double sigma_integrate(const GHConfig& config, const std::function<double(double)>& f, int order = 32);
double vol_sigma(const GHConfig& config, int order = 32);

// Flat cone model with the same total charge and gauge; used for decay measurements.
GHConfig flat_model(const GHConfig& config);
// r with r^2 = 2 (k+1) rho.
double model_radius(const GHConfig& config, const Vec3& x);

}  // namespace ale
