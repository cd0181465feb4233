#pragma once

#include "ale/quadrature.hpp"

namespace ale {

// Omega = c d((V0 / V) eta - eta0), V0 the potential of the p0 cluster.
struct HarmonicFormBundle {
  GHConfig config;
  double normalization = 1.0;
  double sigma_self_intersection = 0.0;

  Form omega_at(const ChartPoint& p) const;
  FormField omega_field(Patch patch) const;
  // int_Sigma Omega by the 2 pi dx^1 rule along the segment.
  double sigma_integral(int order = 48) const;
};

HarmonicFormBundle build_Omega(const GHConfig& config);

struct NormOptions {
  double r_out_factor = 40.0;  // R_out = r_out_factor (k+1) lambda
  double scale = 1.0;          // norm of scale * Omega
  double tail_limit = 0.1;
  QuadratureSpec spec{12, 32};
  int panels = 8;
};

struct NormResult {
  double value = 0.0;
  double interior = 0.0;
  double tail = 0.0;
  double tail_fraction = 0.0;
  double r_out = 0.0;
};

NormResult omega_norm(const HarmonicFormBundle& bundle, const NormOptions& options = {});

// int_Sigma omega_1 / int_Sigma Omega.
double s_ratio(const HarmonicFormBundle& bundle);

struct AlphaSplitReport {
  double plus_residual = 0.0;     // max |alpha^+ + omega_1|
  double minus_residual = 0.0;    // max |alpha^- - s Omega|
  double d_minus_residual = 0.0;  // max |d alpha^-|
  std::size_t points = 0;
};

// alpha = -1/2 d J_1 dm by finite differences.
AlphaSplitReport alpha_split_check(const HarmonicFormBundle& bundle, const std::vector<ChartPoint>& points,
                                   const FdScheme& fd = {});

struct AsymptoticFit {
  double c_gamma = 0.0;
  double a1 = 0.0;
  double next_coefficient = 0.0;
  double condition = 0.0;
  std::vector<double> radii;
  std::vector<double> c_gamma_by_radius;
  std::vector<double> a1_by_radius;
  double omega_exponent = 0.0;
  double density_exponent = 0.0;
  double metric_exponent = 0.0;
  double moment_exponent = 0.0;
};

// Least-squares fit of Omega = sum_n C_n dd^C u_n in the far field with u_1 = 1/r^2,
// u_2 = q_1/r^6 (q_1 = 2(k+1)x^1) and one further axial harmonic; radii are model radii.
AsymptoticFit asymptotic_fit(const HarmonicFormBundle& bundle, const std::vector<double>& radii,
                             double condition_limit = 1e12);

// Far-field sample directions and lifts at model radius r.
std::vector<ChartPoint> far_field_points(const GHConfig& config, double r);

// max over far-field points of |Omega - 4 c_Gamma r^-4 (dr ^ J_1 dr - J_2 dr ^ J_3 dr)| / |profile|.
double leading_profile_error(const HarmonicFormBundle& bundle, double r);

// |g - g_model| in the orthonormal frame of the flat cone model, max over far-field points.
double metric_deviation(const GHConfig& config, double r);
// max |m - r^2 / 2| over far-field points.
double moment_deviation(const GHConfig& config, double r);

double harmonic_phi1(const GHConfig& config, const ChartPoint& p);

// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ale
