#include "ale/quadrature.hpp"

#include <boost/rational.hpp>

#include <cmath>
#include <random>

namespace ale {

void QuadratureSpec::validate() const {
  if (sphere_order < 4 || radial_nodes < 4) throw ConfigError("quadrature orders must be at least 4");
  if (!(radius > 0.0)) throw ConfigError("sphere radius must be positive");
  if (region == Region::annulus && !(r_outer > r_inner && r_inner >= 0.0))
    throw ConfigError("annulus needs 0 <= r_inner < r_outer");
}

namespace {

struct S3Node {
  Vec4 x;
  double weight;
};

std::vector<S3Node> s3_nodes(double radius, const QuadratureSpec& spec) {
  spec.validate();
  const GaussRule u_rule = gauss_legendre(spec.sphere_order, 0.0, 1.0);
  const GaussRule angle = periodic_rule(2 * spec.sphere_order);
  std::vector<S3Node> nodes;
  nodes.reserve(u_rule.nodes.size() * angle.nodes.size() * angle.nodes.size());
  const double r3 = radius * radius * radius;
  for (std::size_t i = 0; i < u_rule.nodes.size(); ++i) {
    const double r1 = radius * std::sqrt(u_rule.nodes[i]);
    const double r2 = radius * std::sqrt(1.0 - u_rule.nodes[i]);
    for (std::size_t a = 0; a < angle.nodes.size(); ++a)
      for (std::size_t b = 0; b < angle.nodes.size(); ++b) {
        const double alpha = angle.nodes[a], beta = angle.nodes[b];
        nodes.push_back({Vec4(r1 * std::cos(alpha), r1 * std::sin(alpha), r2 * std::cos(beta), r2 * std::sin(beta)),
                         0.5 * r3 * u_rule.weights[i] * angle.weights[a] * angle.weights[b]});
      }
  }
  return nodes;
}

double weighted_sum(const std::vector<S3Node>& nodes, const SphereIntegrand& f) {
  const auto values = parallel_map<double>(nodes.size(), [&](std::size_t n) { return nodes[n].weight * f(nodes[n].x); });
  return pairwise_sum(values);
}

// Monomials x_a x_b, a <= b, in lexicographic order.
const std::array<std::pair<int, int>, 10>& monomials() {
  static const std::array<std::pair<int, int>, 10> list = [] {
    std::array<std::pair<int, int>, 10> out{};
    int n = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) out[static_cast<std::size_t>(n++)] = {a, b};
    return out;
  }();
  return list;
}

const std::array<Form, 3>& basis_for(Duality duality) {
  return duality == Duality::anti_self_dual ? flat_asd_basis() : flat_sd_basis();
}

using Rational = boost::rational<long long>;

std::vector<Eigen::VectorXd> exact_null_space(const Eigen::MatrixXd& m) {
  const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  std::vector<std::vector<Rational>> a(static_cast<std::size_t>(rows), std::vector<Rational>(static_cast<std::size_t>(cols)));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a[r][c] = Rational(static_cast<long long>(std::llround(m(r, c))));
  std::vector<int> pivot_cols;
  int row = 0;
  for (int c = 0; c < cols && row < rows; ++c) {
    int pivot = -1;
    for (int r = row; r < rows; ++r)
      if (a[r][c].numerator() != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[row], a[pivot]);
    const Rational lead = a[row][c];
    for (auto& v : a[row]) v /= lead;
    for (int r = 0; r < rows; ++r) {
      if (r == row || a[r][c].numerator() == 0) continue;
      const Rational factor = a[r][c];
      for (int j = 0; j < cols; ++j) a[r][j] -= factor * a[row][j];
    }
    pivot_cols.push_back(c);
    ++row;
  }
  std::vector<Eigen::VectorXd> basis;
  for (int free = 0; free < cols; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(cols);
    v[free] = 1.0;
    for (std::size_t p = 0; p < pivot_cols.size(); ++p)
      v[pivot_cols[p]] = -boost::rational_cast<double>(a[p][free]);
    basis.push_back(v);
  }
  return basis;
}

}  // namespace

double integrate_S3(const SphereIntegrand& f, double radius, const QuadratureSpec& spec) {
  return weighted_sum(s3_nodes(radius, spec), f);
}

double integrate_S3_form(const std::function<Form(const Vec4&)>& three_form, double radius,
                         const QuadratureSpec& spec) {
  return integrate_S3(
      [&](const Vec4& x) {
        const Form normal = one_form(x / x.norm());
        return wedge(normal, three_form(x))[0];
      },
      radius, spec);
}

Form QuadraticTriple::assemble(const Vec4& x) const {
  const auto& basis = basis_for(duality);
  Form out(2);
  for (int i = 0; i < 3; ++i) out += coefficient(i, x) * basis[i];
  return out;
}

Form QuadraticTriple::exterior_derivative(const Vec4& x) const {
  const auto& basis = basis_for(duality);
  Form out(3);
  for (int i = 0; i < 3; ++i) out += wedge(one_form(2.0 * z[i] * x), basis[i]);
  return out;
}

Eigen::MatrixXd closedness_matrix(Duality duality) {
  const auto& basis = basis_for(duality);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(16, 30);
  for (int i = 0; i < 3; ++i)
    for (int n = 0; n < 10; ++n) {
      const auto [alpha, beta] = monomials()[static_cast<std::size_t>(n)];
      // d(x_alpha x_beta) = x_beta dx_alpha + x_alpha dx_beta; record the coefficient of each x_m.
      for (int mono = 0; mono < 4; ++mono) {
        Vec4 grad = Vec4::Zero();
        if (mono == beta) grad[alpha] += 1.0;
        if (mono == alpha) grad[beta] += 1.0;
        const Form piece = wedge(one_form(grad), basis[i]);
        for (int s = 0; s < 4; ++s) m(4 * s + mono, 10 * i + n) += piece[s];
      }
    }
  return m;
}

const std::vector<Eigen::VectorXd>& closed_quadratic_basis(Duality duality) {
  static const std::vector<Eigen::VectorXd> sd = exact_null_space(closedness_matrix(Duality::self_dual));
  static const std::vector<Eigen::VectorXd> asd = exact_null_space(closedness_matrix(Duality::anti_self_dual));
  return duality == Duality::anti_self_dual ? asd : sd;
}

QuadraticTriple triple_from_null_coordinates(Duality duality, const Eigen::VectorXd& coords) {
  const auto& basis = closed_quadratic_basis(duality);
  if (static_cast<std::size_t>(coords.size()) != basis.size())
    throw std::invalid_argument("null-space coordinate vector has the wrong length");
  Eigen::VectorXd flat = Eigen::VectorXd::Zero(30);
  for (std::size_t q = 0; q < basis.size(); ++q) flat += coords[static_cast<long>(q)] * basis[q];
  QuadraticTriple t;
  t.duality = duality;
  for (int i = 0; i < 3; ++i)
    for (int n = 0; n < 10; ++n) {
      const auto [a, b] = monomials()[static_cast<std::size_t>(n)];
      const double c = flat[10 * i + n];
      if (a == b) {
        t.z[i](a, a) = c;
      } else {
        t.z[i](a, b) = 0.5 * c;
        t.z[i](b, a) = 0.5 * c;
      }
    }
  return t;
}

namespace {
QuadraticTriple random_closed(Duality duality, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd coords(static_cast<long>(closed_quadratic_basis(duality).size()));
  for (long q = 0; q < coords.size(); ++q) coords[q] = normal(rng);
  return triple_from_null_coordinates(duality, coords);
}
}  // namespace

QuadraticTriple random_closed_sd_quadratic(std::uint64_t seed) { return random_closed(Duality::self_dual, seed); }
QuadraticTriple random_closed_asd_quadratic(std::uint64_t seed) {
  return random_closed(Duality::anti_self_dual, seed);
}

double second_derivative_identity_residual(const QuadraticTriple& t) {
  auto d2 = [&](int i, int a, int b) { return 2.0 * t.z[i](a, b); };
  const double left = (d2(1, 0, 3) + d2(1, 1, 2)) - (d2(2, 0, 2) - d2(2, 1, 3));
  const double right = 0.5 * (-d2(0, 0, 0) - d2(0, 1, 1) + d2(0, 2, 2) + d2(0, 3, 3));
  return left - right;
}

PairingResult dCF_pairing(const QuadraticTriple& triple, const QuadratureSpec& spec) {
  const Form& omega1 = flat_sd_basis()[0];
  const Mat4 euclid = Mat4::Identity();
  auto integrand = [&](const Vec4& x) {
    const double r2 = x.squaredNorm();
    const double diff = x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
    const Vec4 signs(x[0], x[1], -x[2], -x[3]);
    const Vec4 dF = 2.0 * signs / std::pow(r2, 3) - 6.0 * diff * x / std::pow(r2, 4);
    const Form dcF = one_form(apply_J(euclid, omega1, dF));
    return wedge(dcF, triple.assemble(x));
  };
  PairingResult out;
  out.lhs = integrate_S3_form(integrand, spec.radius, spec);
  const Mat4& z1 = triple.z[0];
  out.rhs = 0.5 * M_PI * M_PI * 2.0 * (-z1(0, 0) - z1(1, 1) + z1(2, 2) + z1(3, 3));
  return out;
}

double integrate_volume(const GHConfig& config, const std::function<double(const ChartPoint&)>& density,
                        const VolumeRegion& region, const QuadratureSpec& spec) {
  spec.validate();
  struct Node {
    Vec3 x;
    double weight;  // includes the R^3 Jacobian, not V
  };
  std::vector<Node> nodes;
  if (region.kind == VolumeRegion::Kind::ball) {
    const double rho_max = region.model_radius * region.model_radius / (2.0 * config.total_multiplicity());
    const GaussRule radial = gauss_legendre(spec.radial_nodes, 0.0, rho_max);
    const GaussRule polar = gauss_legendre(spec.sphere_order, -1.0, 1.0);
    const GaussRule azimuth = periodic_rule(2 * spec.sphere_order);
    for (std::size_t i = 0; i < radial.nodes.size(); ++i)
      for (std::size_t j = 0; j < polar.nodes.size(); ++j)
        for (std::size_t l = 0; l < azimuth.nodes.size(); ++l) {
          const double rho = radial.nodes[i], c = polar.nodes[j], s = std::sqrt(1.0 - c * c);
          const double phi = azimuth.nodes[l];
          nodes.push_back({rho * Vec3(c, s * std::cos(phi), s * std::sin(phi)),
                           rho * rho * radial.weights[i] * polar.weights[j] * azimuth.weights[l]});
        }
  } else {
    const double a = 0.5 * (region.focus_end - region.focus_begin);
    const double mid = 0.5 * (region.focus_end + region.focus_begin);
    if (!(a > 0.0) || !(region.semi_major > a)) throw ConfigError("spheroid needs semi_major > focal half-distance");
    const double sigma_out = region.semi_major / a;
    const GaussRule tau_rule = gauss_legendre(2 * spec.sphere_order, -1.0, 1.0);
    const GaussRule azimuth = periodic_rule(spec.sphere_order);
    const int panels = std::max(1, region.spheroid_panels);
    double lo = 1.0;
    for (int p = 0; p < panels; ++p) {
      const double hi = 1.0 + (sigma_out - 1.0) * std::ldexp(1.0, p + 1 - panels);
      const GaussRule sigma_rule = gauss_legendre(spec.radial_nodes, lo, hi);
      for (std::size_t i = 0; i < sigma_rule.nodes.size(); ++i)
        for (std::size_t j = 0; j < tau_rule.nodes.size(); ++j)
          for (std::size_t l = 0; l < azimuth.nodes.size(); ++l) {
            const double sigma = sigma_rule.nodes[i], tau = tau_rule.nodes[j], phi = azimuth.nodes[l];
            const double perp = a * std::sqrt((sigma * sigma - 1.0) * (1.0 - tau * tau));
            nodes.push_back({Vec3(mid + a * sigma * tau, perp * std::cos(phi), perp * std::sin(phi)),
                             a * a * a * (sigma * sigma - tau * tau) * sigma_rule.weights[i] * tau_rule.weights[j] *
                                 azimuth.weights[l]});
          }
      lo = hi;
    }
  }
  const auto values = parallel_map<double>(nodes.size(), [&](std::size_t n) {
    const Node& node = nodes[n];
    const ChartPoint p{node.x, 0.0, preferred_patch(config, node.x)};
    return node.weight * eval_V(config, node.x) * density(p);
  });
  return 2.0 * M_PI * pairwise_sum(values);
}

}  // namespace ale
