#pragma once

#include "ale/gauss.hpp"
#include "ale/gh_space.hpp"

#include <cstdint>

namespace ale {

enum class Region { sphere, annulus, ball, sigma };

// sphere_order Gauss-Legendre nodes in u = sin^2(chi) and 2 * sphere_order periodic nodes
// per angle: polynomials of total degree <= 2 * sphere_order - 1 integrate exactly.
struct QuadratureSpec {
  int sphere_order = 16;
  int radial_nodes = 32;
  Region region = Region::sphere;
  double radius = 1.0;
  double r_inner = 0.0;
  double r_outer = 1.0;

  void validate() const;
};

using SphereIntegrand = std::function<double(const Vec4&)>;

// Hopf-torus coordinates x = (r1 cos a, r1 sin a, r2 cos b, r2 sin b), r1^2 = R^2 u.
double integrate_S3(const SphereIntegrand& f, double radius, const QuadratureSpec& spec = {});
// Integral of the pullback of a 3-form, S^3 oriented as the boundary of the ball.
double integrate_S3_form(const std::function<Form(const Vec4&)>& three_form, double radius,
                         const QuadratureSpec& spec = {});

// varpi = sum_i z_i omega_i (or theta_i) with z_i(x) = x^T Z_i x.
struct QuadraticTriple {
  std::array<Mat4, 3> z{Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};
  Duality duality = Duality::self_dual;

  double coefficient(int i, const Vec4& x) const { return x.dot(z[i] * x); }
  Form assemble(const Vec4& x) const;
  // Exact d varpi at x.
  Form exterior_derivative(const Vec4& x) const;
};

// Integer constraint matrix (16 x 30) of d varpi = 0 on the monomial coefficients,
// columns ordered (i, a <= b) with i slowest.
Eigen::MatrixXd closedness_matrix(Duality duality);
// Basis of its null space, from exact rational elimination.
const std::vector<Eigen::VectorXd>& closed_quadratic_basis(Duality duality);
QuadraticTriple triple_from_null_coordinates(Duality duality, const Eigen::VectorXd& coords);
QuadraticTriple random_closed_sd_quadratic(std::uint64_t seed);
QuadraticTriple random_closed_asd_quadratic(std::uint64_t seed);

// (d14 + d23) z2 - (d13 - d24) z3 - 1/2 (-d11 - d22 + d33 + d44) z1 (1-based axes).
double second_derivative_identity_residual(const QuadraticTriple& triple);

struct PairingResult {
  double lhs = 0.0;
  double rhs = 0.0;
};

// lhs = int_{S^3} d^C F ^ varpi with F = (r1^2 - r2^2) / r^6 and d^C = J_1 d,
// rhs = pi^2/2 (-d11 - d22 + d33 + d44) z1.
PairingResult dCF_pairing(const QuadraticTriple& triple, const QuadratureSpec& spec = {});

struct VolumeRegion {
  enum class Kind { ball, spheroid };
  Kind kind = Kind::ball;
  // ball: points with model radius sqrt(2 (k+1) |x|) <= model_radius.
  double model_radius = 1.0;
  // spheroid: prolate spheroid with foci on the x1 axis.
  double focus_begin = -1.0;
  double focus_end = 1.0;
  double semi_major = 2.0;
  int spheroid_panels = 8;
};

// int density dvol_g over the region, fiber-invariant density, volume V dx^1 dx^2 dx^3 d theta.
double integrate_volume(const GHConfig& config, const std::function<double(const ChartPoint&)>& density,
                        const VolumeRegion& region, const QuadratureSpec& spec = {});

}  // namespace ale
