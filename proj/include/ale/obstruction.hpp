#pragma once

#include "ale/exterior/riemann.hpp"
#include "ale/gh_space.hpp"

#include <optional>

namespace ale {

// Quadratic metric jet g_kl = delta_kl + H_ijkl x^i x^j, symmetric in (i, j) and in (k, l).
struct Jet2 {
  std::array<double, 256> h{};

  double& operator()(int i, int j, int k, int l) { return h[static_cast<std::size_t>(64 * i + 16 * j + 4 * k + l)]; }
  double operator()(int i, int j, int k, int l) const {
    return h[static_cast<std::size_t>(64 * i + 16 * j + 4 * k + l)];
  }
  // Largest deviation from the declared symmetries.
  double asymmetry() const;
  void symmetrize();
  // Throws SymmetryError naming the worst index pair when asymmetry exceeds tol.
  static Jet2 ingest(const std::array<double, 256>& raw, double tol = 1e-12);
  Jet2& operator+=(const Jet2& other);
  Jet2 scaled(double s) const;
  double max_abs() const;
};

// Quartic jet H2_ijklmn x^i x^j x^k x^l dx^m dx^n, symmetric in (i, j, k, l) and in (m, n).
struct Jet4 {
  std::vector<double> h = std::vector<double>(4096, 0.0);

  static std::size_t index(int i, int j, int k, int l, int m, int n) {
    return static_cast<std::size_t>(((((i * 4 + j) * 4 + k) * 4 + l) * 4 + m) * 4 + n);
  }
  double& operator()(int i, int j, int k, int l, int m, int n) { return h[index(i, j, k, l, m, n)]; }
  double operator()(int i, int j, int k, int l, int m, int n) const { return h[index(i, j, k, l, m, n)]; }
  double asymmetry() const;
  void symmetrize();
  static Jet4 ingest(const std::vector<double>& raw, double tol = 1e-12);
  Jet4& operator+=(const Jet4& other);
  Jet4 scaled(double s) const;
};

// Exact metric jet of euc + H + H2 at x.
MetricJet polynomial_metric_jet(const Jet2& H, const Jet4* H2, const Vec4& x);
MetricField polynomial_metric(const Jet2& H, const Jet4* H2 = nullptr);

// Linear form B_euc H = delta H + 1/2 d tr H: coefficient (k, j) of x^j dx^k.
Mat4 bianchi_residual(const Jet2& H);

// delta^* of the cubic field xi_l = C_{l,abc} x^a x^b x^c, C stored as 4 x 4^3 (symmetrized here).
Jet2 cubic_gauge_jet(const std::vector<double>& field);
// delta^* of the quintic field xi_l = C_{l,abcde} x^a ... x^e, C stored as 4 x 4^5.
Jet4 quintic_gauge_jet(const std::vector<double>& field);

struct GaugeInfo {
  int rank = 0;
  double residual_before = 0.0;
  double residual_after = 0.0;
};

Jet2 gauge_project(const Jet2& jet, GaugeInfo* info = nullptr);

// Riemann tensor of euc + H at the origin.
Tensor4 riemann_from_jet2(const Jet2& H);
CurvatureBlock curvature_from_jet2(const Jet2& H);

// Algebraic curvature tensor with the given bundle-sign blocks, W_- = 0.
Tensor4 curvature_tensor_from_blocks(const Mat3& Rplus, const Mat3& Rminus);
// Normal-coordinate quadratic jet H_ijkl = -(R_kilj + R_kjli) / 6 of a curvature tensor.
Jet2 normal_jet(const Tensor4& riemann);

// <(nabla^2_11 + nabla^2_22 - nabla^2_33 - nabla^2_44) R(I_1), I_1> at the origin.
struct D2Options {
  double step = 5e-3;
  double first_row_tolerance = 1e-8;
  bool covariant = true;
};
double d2_invariant(const Jet2& H, const Jet4& H2, const D2Options& options = {});

// Finite subgroups of SU_2 acting on R^4 through the anti-self-dual quaternion structures.
std::vector<Mat4> cyclic_group(int order);
std::vector<Mat4> binary_dihedral_group(int n);
std::vector<Mat4> binary_tetrahedral_group();
// C' = sum over slots of C contracted with the matrix; pullback of jets and polynomial fields by an isometry.
std::vector<double> transform_tensor(const std::vector<double>& tensor, int rank, const Mat4& linear);
std::vector<double> average_tensor(const std::vector<double>& tensor, int rank, const std::vector<Mat4>& group);

enum class Series { A, D, E };
enum class ConstantSource { computed, user_supplied };

struct InstantonConstants {
  double vol_sigma = 0.0;
  double omega_norm2 = 0.0;
  double int_m_omega1 = 0.0;
  double m_p1 = 0.0;
  ConstantSource source = ConstantSource::computed;
};

struct ConstantOverrides {
  std::optional<double> vol_sigma, omega_norm2, int_m_omega1, m_p1;
  bool complete() const { return vol_sigma && omega_norm2 && int_m_omega1 && m_p1; }
};

struct ObstructionSetup {
  Series series = Series::A;
  int k = 1;
  double lambda = 1.0;
  ConstantOverrides overrides;
};

// A series: quadrature of the Gibbons-Hawking model; D and E: overrides are required.
InstantonConstants resolve_constants(const ObstructionSetup& setup);

double minor_of(const Mat3& Rplus);
Vec3 lambda_obstruction(const Mat3& Rplus, const InstantonConstants& constants);
double mu1_generic(const Mat3& Rplus, const InstantonConstants& constants);
double mu1_Ak(const Mat3& Rplus, double D, int k, const InstantonConstants& constants);
double A_coefficient(const Mat3& Rplus, double D, int k, const InstantonConstants& constants);
// Same value through m(p_1) - int_Sigma m omega_1 / Vol Sigma.
double A_coefficient_moment_form(const Mat3& Rplus, double D, int k, const InstantonConstants& constants);

struct DetLeading {
  std::vector<double> t;
  std::vector<double> value;   // minor A t^4
  std::vector<Mat3> block;     // diag(A t^2, t R_middle)
};
DetLeading det_leading(const Mat3& Rplus, double A, const std::vector<double>& t_values);

enum class WallSide { einstein_side, on_wall, empty_side };
const char* to_string(WallSide side);
// det of the curvature-operator block, which is minus the bundle-sign block.
double bold_determinant(const Mat3& Rplus);
WallSide wall_side(double det_bold, double tol = 1e-8);

struct ObstructionReport {
  Mat3 Rplus_block = Mat3::Zero();
  Vec3 lambda = Vec3::Zero();
  double minor = 0.0;
  std::optional<double> D, mu1, A, A_moment_form;
  DetLeading det;
  double det_bold = 0.0;
  WallSide side = WallSide::on_wall;
  InstantonConstants constants;
  GaugeInfo gauge;
  bool gauge_projected = false;
  std::string first_obstruction_status;
};

struct ObstructionRequest {
  ObstructionSetup setup;
  Jet2 H;
  std::optional<Jet4> H2;
  bool gauge = true;
  std::vector<double> t_values{0.01, 0.05, 0.1};
  double wall_tolerance = 1e-8;
};

ObstructionReport compute_obstruction(const ObstructionRequest& request);

}  // namespace ale
