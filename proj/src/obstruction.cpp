#include "ale/obstruction.hpp"

#include "ale/l2_harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ale {
namespace {

std::string index_label(std::initializer_list<int> idx) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (int i : idx) {
    os << (first ? "" : "][") << i;
    first = false;
  }
  os << ']';
  return os.str();
}

// Mean over all permutations of the first `count` slots of a rank-`rank` tensor on R^4.
std::vector<double> symmetrize_leading(const std::vector<double>& t, int rank, int count) {
  std::vector<int> perm(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::vector<double> out(t.size(), 0.0);
  int n_perm = 0;
  std::vector<int> digits(static_cast<std::size_t>(rank));
  do {
    ++n_perm;
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      std::size_t rest = flat;
      for (int s = rank - 1; s >= 0; --s) {
        digits[static_cast<std::size_t>(s)] = static_cast<int>(rest % 4);
        rest /= 4;
      }
      std::size_t src = 0;
      for (int s = 0; s < rank; ++s) {
        const int from = s < count ? perm[static_cast<std::size_t>(s)] : s;
        src = src * 4 + static_cast<std::size_t>(digits[static_cast<std::size_t>(from)]);
      }
      out[flat] += t[src];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& v : out) v /= n_perm;
  return out;
}

const std::array<Form, 3>& omega_basis() { return flat_sd_basis(); }

}  // namespace

double Jet2::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          worst = std::max({worst, std::abs((*this)(i, j, k, l) - (*this)(j, i, k, l)),
                            std::abs((*this)(i, j, k, l) - (*this)(i, j, l, k))});
  return worst;
}

void Jet2::symmetrize() {
  Jet2 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          out(i, j, k, l) = 0.25 * ((*this)(i, j, k, l) + (*this)(j, i, k, l) + (*this)(i, j, l, k) + (*this)(j, i, l, k));
  h = out.h;
}

Jet2 Jet2::ingest(const std::array<double, 256>& raw, double tol) {
  Jet2 jet;
  jet.h = raw;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          if (std::abs(jet(i, j, k, l) - jet(j, i, k, l)) > tol)
            throw SymmetryError("H" + index_label({i, j, k, l}) + " != H" + index_label({j, i, k, l}));
          if (std::abs(jet(i, j, k, l) - jet(i, j, l, k)) > tol)
            throw SymmetryError("H" + index_label({i, j, k, l}) + " != H" + index_label({i, j, l, k}));
        }
  jet.symmetrize();
  return jet;
}

Jet2& Jet2::operator+=(const Jet2& other) {
  for (std::size_t n = 0; n < h.size(); ++n) h[n] += other.h[n];
  return *this;
}

Jet2 Jet2::scaled(double s) const {
  Jet2 out = *this;
  for (double& v : out.h) v *= s;
  return out;
}

double Jet2::max_abs() const {
  double worst = 0.0;
  for (double v : h) worst = std::max(worst, std::abs(v));
  return worst;
}

double Jet4::asymmetry() const {
  const std::vector<double> sym = symmetrize_leading(h, 6, 4);
  Jet4 swapped = *this;
  for (int a = 0; a < 256; ++a)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        swapped.h[static_cast<std::size_t>(16 * a + 4 * m + n)] = h[static_cast<std::size_t>(16 * a + 4 * n + m)];
  double worst = 0.0;
  for (std::size_t q = 0; q < h.size(); ++q)
    worst = std::max({worst, std::abs(h[q] - sym[q]), std::abs(h[q] - swapped.h[q])});
  return worst;
}

void Jet4::symmetrize() {
  std::vector<double> s = symmetrize_leading(h, 6, 4);
  std::vector<double> out(s.size());
  for (int a = 0; a < 256; ++a)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        out[static_cast<std::size_t>(16 * a + 4 * m + n)] =
            0.5 * (s[static_cast<std::size_t>(16 * a + 4 * m + n)] + s[static_cast<std::size_t>(16 * a + 4 * n + m)]);
  h = std::move(out);
}

Jet4 Jet4::ingest(const std::vector<double>& raw, double tol) {
  if (raw.size() != 4096) throw SchemaError("H2 must have 4^6 entries");
  Jet4 jet;
  jet.h = raw;
  Jet4 sym = jet;
  sym.symmetrize();
  for (std::size_t q = 0; q < raw.size(); ++q)
    if (std::abs(raw[q] - sym.h[q]) > tol) {
      int d[6];
      std::size_t rest = q;
      for (int s = 5; s >= 0; --s) d[s] = static_cast<int>(rest % 4), rest /= 4;
      throw SymmetryError("H2" + index_label({d[0], d[1], d[2], d[3], d[4], d[5]}) +
                          " breaks the (ijkl)(mn) symmetry");
    }
  return sym;
}

Jet4& Jet4::operator+=(const Jet4& other) {
  for (std::size_t n = 0; n < h.size(); ++n) h[n] += other.h[n];
  return *this;
}

Jet4 Jet4::scaled(double s) const {
  Jet4 out = *this;
  for (double& v : out.h) v *= s;
  return out;
}

MetricJet polynomial_metric_jet(const Jet2& H, const Jet4* H2, const Vec4& x) {
  MetricJet jet;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double g = m == n ? 1.0 : 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g += H(i, j, m, n) * x[i] * x[j];
      jet.g(m, n) = g;
      for (int c = 0; c < 4; ++c) {
        double first = 0.0;
        for (int j = 0; j < 4; ++j) first += 2.0 * H(c, j, m, n) * x[j];
        jet.first(c, m, n) = first;
        for (int d = 0; d < 4; ++d) jet.second(c, d, m, n) = 2.0 * H(c, d, m, n);
      }
    }
  if (H2 != nullptr) {
    const Jet4& Q = *H2;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            double quad = 0.0;
            for (int k = 0; k < 4; ++k)
              for (int l = 0; l < 4; ++l) quad += Q(c, d, k, l, m, n) * x[k] * x[l];
            jet.second(c, d, m, n) += 12.0 * quad;
            if (d == 0) {
              double cubic = 0.0;
              for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                  for (int l = 0; l < 4; ++l) cubic += Q(c, j, k, l, m, n) * x[j] * x[k] * x[l];
              jet.first(c, m, n) += 4.0 * cubic;
            }
          }
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        double quartic = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
              for (int l = 0; l < 4; ++l) quartic += Q(i, j, k, l, m, n) * x[i] * x[j] * x[k] * x[l];
        jet.g(m, n) += quartic;
      }
  }
  return jet;
}

MetricField polynomial_metric(const Jet2& H, const Jet4* H2) {
  std::optional<Jet4> owned;
  if (H2 != nullptr) owned = *H2;
  return [H, owned](const Vec4& x) { return polynomial_metric_jet(H, owned ? &*owned : nullptr, x).g; };
}

Mat4 bianchi_residual(const Jet2& H) {
  Mat4 B = Mat4::Zero();
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) B(k, j) += -2.0 * H(i, j, i, k) + H(k, j, i, i);
  return B;
}

Jet2 cubic_gauge_jet(const std::vector<double>& field) {
  if (field.size() != 256) throw ConfigError("cubic field needs 4 x 4^3 coefficients");
  std::vector<double> sym(256);
  for (int l = 0; l < 4; ++l) {
    std::vector<double> block(field.begin() + 64 * l, field.begin() + 64 * (l + 1));
    block = symmetrize_leading(block, 3, 3);
    std::copy(block.begin(), block.end(), sym.begin() + 64 * l);
  }
  auto C = [&](int l, int a, int b, int c) { return sym[static_cast<std::size_t>(64 * l + 16 * a + 4 * b + c)]; };
  Jet2 out;
  for (int q = 0; q < 4; ++q)
    for (int r = 0; r < 4; ++r)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) out(q, r, k, l) = 1.5 * (C(l, k, q, r) + C(k, l, q, r));
  return out;
}

Jet4 quintic_gauge_jet(const std::vector<double>& field) {
  if (field.size() != 4096) throw ConfigError("quintic field needs 4 x 4^5 coefficients");
  std::vector<double> sym(4096);
  for (int l = 0; l < 4; ++l) {
    std::vector<double> block(field.begin() + 1024 * l, field.begin() + 1024 * (l + 1));
    block = symmetrize_leading(block, 5, 5);
    std::copy(block.begin(), block.end(), sym.begin() + 1024 * l);
  }
  Jet4 out;
  for (int q = 0; q < 256; ++q)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l)
        out.h[static_cast<std::size_t>(16 * q + 4 * k + l)] =
            2.5 * (sym[static_cast<std::size_t>(1024 * l + 256 * k + q)] + sym[static_cast<std::size_t>(1024 * k + 256 * l + q)]);
  return out;
}

Jet2 gauge_project(const Jet2& jet, GaugeInfo* info) {
  static const Eigen::MatrixXd system = [] {
    Eigen::MatrixXd m(16, 256);
    for (int col = 0; col < 256; ++col) {
      std::vector<double> unit(256, 0.0);
      unit[static_cast<std::size_t>(col)] = 1.0;
      const Mat4 B = bianchi_residual(cubic_gauge_jet(unit));
      for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j) m(4 * k + j, col) = B(k, j);
    }
    return m;
  }();
  const Mat4 before = bianchi_residual(jet);
  Eigen::VectorXd rhs(16);
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) rhs[4 * k + j] = -before(k, j);
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system);
  const Eigen::VectorXd solution = cod.solve(rhs);
  Jet2 out = jet;
  out += cubic_gauge_jet(std::vector<double>(solution.data(), solution.data() + solution.size()));
  if (info != nullptr) {
    info->rank = static_cast<int>(cod.rank());
    info->residual_before = before.cwiseAbs().maxCoeff();
    info->residual_after = bianchi_residual(out).cwiseAbs().maxCoeff();
  }
  return out;
}

Tensor4 riemann_from_jet2(const Jet2& H) {
  Tensor4 R;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) R(a, b, c, d) = H(b, c, a, d) + H(a, d, b, c) - H(b, d, a, c) - H(a, c, b, d);
  return R;
}

CurvatureBlock curvature_from_jet2(const Jet2& H) {
  RiemannData data;
  data.riemann = riemann_from_jet2(H);
  return block_from_riemann(data, flat_sd_basis(), flat_asd_basis());
}

Tensor4 curvature_tensor_from_blocks(const Mat3& Rplus, const Mat3& Rminus) {
  // Curvature operator on the orthonormal basis (omega_i, theta_i) / sqrt 2.
  Eigen::Matrix<double, 6, 6> op = Eigen::Matrix<double, 6, 6>::Zero();
  const Mat3 sym_plus = 0.5 * (Rplus + Rplus.transpose());
  op.topLeftCorner<3, 3>() = -sym_plus;
  op.topRightCorner<3, 3>() = -Rminus;
  op.bottomLeftCorner<3, 3>() = -Rminus.transpose();
  op.bottomRightCorner<3, 3>() = -(sym_plus.trace() / 3.0) * Mat3::Identity();
  std::array<Mat4, 6> basis;
  for (int i = 0; i < 3; ++i) {
    basis[static_cast<std::size_t>(i)] = as_matrix(flat_sd_basis()[static_cast<std::size_t>(i)]) / std::sqrt(2.0);
    basis[static_cast<std::size_t>(i + 3)] = as_matrix(flat_asd_basis()[static_cast<std::size_t>(i)]) / std::sqrt(2.0);
  }
  Tensor4 R;
  for (int X = 0; X < 6; ++X)
    for (int Y = 0; Y < 6; ++Y) {
      if (op(X, Y) == 0.0) continue;
      const Mat4& ex = basis[static_cast<std::size_t>(X)];
      const Mat4& ey = basis[static_cast<std::size_t>(Y)];
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) R(a, b, c, d) += op(X, Y) * ey(a, b) * ex(c, d);
    }
  return R;
}

Jet2 normal_jet(const Tensor4& R) {
  Jet2 H;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) H(i, j, k, l) = -(R(k, i, l, j) + R(k, j, l, i)) / 6.0;
  return H;
}

double d2_invariant(const Jet2& H, const Jet4& H2, const D2Options& options) {
  const CurvatureBlock block = curvature_from_jet2(H);
  const double first_row = block.Rplus.row(0).norm();
  if (first_row > options.first_row_tolerance)
    throw FirstObstructionNonzero("R_+(H)(I_1) has norm " + std::to_string(first_row));
  const Mat4 w = as_matrix(omega_basis()[0]);
  auto contracted = [&](const Tensor4& R) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (w(i, j) == 0.0) continue;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) s += R(i, j, k, l) * w(i, j) * w(k, l);
      }
    return s;
  };
  auto field = [&](const Vec4& x) { return contracted(riemann_from_jet(polynomial_metric_jet(H, &H2, x)).riemann); };
  static const double signs[4] = {1.0, 1.0, -1.0, -1.0};
  const FdScheme fd{options.step, true};
  const double center = field(Vec4::Zero());
  double total = 0.0;
  for (int a = 0; a < 4; ++a) {
    auto second = [&](double h) {
      const Vec4 e = h * Vec4::Unit(a);
      return (field(e) - 2.0 * center + field(-e)) / (h * h);
    };
    const double coarse = second(fd.h), fine = second(0.5 * fd.h);
    total += signs[a] * (4.0 * fine - coarse) / 3.0;
  }
  if (options.covariant) {
    const Tensor4 R0 = riemann_from_jet2(H);
    // d_a Gamma_{m b s}(0) for the jet metric.
    auto dgamma = [&](int a, int m, int b, int s) { return H(a, s, m, b) + H(a, b, m, s) - H(a, m, b, s); };
    double correction = 0.0;
    for (int a = 0; a < 4; ++a) {
      Tensor4 shifted;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) {
              double v = 0.0;
              for (int m = 0; m < 4; ++m)
                v += dgamma(a, m, a, i) * R0(m, j, k, l) + dgamma(a, m, a, j) * R0(i, m, k, l) +
                     dgamma(a, m, a, k) * R0(i, j, m, l) + dgamma(a, m, a, l) * R0(i, j, k, m);
              shifted(i, j, k, l) = v;
            }
      correction += signs[a] * contracted(shifted);
    }
    total -= correction;
  }
  return -0.25 * total;
}

namespace {

std::vector<Mat4> group_closure(const std::vector<Mat4>& generators) {
  std::vector<Mat4> elements{Mat4::Identity()};
  for (std::size_t n = 0; n < elements.size(); ++n) {
    for (const Mat4& g : generators) {
      const Mat4 candidate = elements[n] * g;
      const bool seen = std::any_of(elements.begin(), elements.end(),
                                    [&](const Mat4& e) { return (e - candidate).cwiseAbs().maxCoeff() < 1e-9; });
      if (!seen) elements.push_back(candidate);
      if (elements.size() > 512) throw ConfigError("group generators do not close");
    }
  }
  return elements;
}

// Quaternion units i, j, k = ij acting on R^4 and commuting with the self-dual structures.
std::array<Mat4, 3> asd_units() {
  const Mat4 i = -as_matrix(flat_asd_basis()[0]);
  const Mat4 j = -as_matrix(flat_asd_basis()[1]);
  return {i, j, i * j};
}

Mat4 rotation_about_I1(double angle) {
  const Mat4 i = asd_units()[0];
  return std::cos(angle) * Mat4::Identity() + std::sin(angle) * i;
}

}  // namespace

std::vector<Mat4> cyclic_group(int order) {
  if (order < 1) throw ConfigError("cyclic group order must be positive");
  return group_closure({rotation_about_I1(2.0 * M_PI / order)});
}

std::vector<Mat4> binary_dihedral_group(int n) {
  if (n < 2) throw ConfigError("binary dihedral group needs n >= 2");
  return group_closure({rotation_about_I1(M_PI / n), asd_units()[1]});
}

std::vector<Mat4> binary_tetrahedral_group() {
  const auto u = asd_units();
  return group_closure({u[0], 0.5 * (Mat4::Identity() + u[0] + u[1] + u[2])});
}

std::vector<double> transform_tensor(const std::vector<double>& tensor, int rank, const Mat4& A) {
  std::vector<double> cur = tensor, next(tensor.size());
  std::size_t stride = 1;
  for (int slot = rank - 1; slot >= 0; --slot, stride *= 4) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t flat = 0; flat < cur.size(); ++flat) {
      const int digit = static_cast<int>((flat / stride) % 4);
      const std::size_t base = flat - static_cast<std::size_t>(digit) * stride;
      for (int to = 0; to < 4; ++to) next[base + static_cast<std::size_t>(to) * stride] += cur[flat] * A(digit, to);
    }
    std::swap(cur, next);
  }
  return cur;
}

std::vector<double> average_tensor(const std::vector<double>& tensor, int rank, const std::vector<Mat4>& group) {
  std::vector<double> sum(tensor.size(), 0.0);
  for (const Mat4& g : group) {
    const auto t = transform_tensor(tensor, rank, g);
    for (std::size_t n = 0; n < sum.size(); ++n) sum[n] += t[n];
  }
  for (double& v : sum) v /= static_cast<double>(group.size());
  return sum;
}

InstantonConstants resolve_constants(const ObstructionSetup& setup) {
  const ConstantOverrides& o = setup.overrides;
  if (setup.series != Series::A) {
    if (!o.complete()) throw MissingConstants("D and E series need volSigma, omegaNorm2, intMomega and mP1");
    return {*o.vol_sigma, *o.omega_norm2, *o.int_m_omega1, *o.m_p1, ConstantSource::user_supplied};
  }
  if (o.vol_sigma || o.omega_norm2 || o.int_m_omega1 || o.m_p1) {
    if (!o.complete()) throw MissingConstants("constant overrides must supply all four values");
    return {*o.vol_sigma, *o.omega_norm2, *o.int_m_omega1, *o.m_p1, ConstantSource::user_supplied};
  }
  const GHConfig cfg = GHConfig::canonical(setup.k, setup.lambda);
  InstantonConstants c;
  c.vol_sigma = vol_sigma(cfg);
  c.omega_norm2 = omega_norm(build_Omega(cfg)).value;
  c.int_m_omega1 = sigma_integrate(cfg, [&cfg](double x1) { return moment_map(cfg, Vec3(x1, 0, 0)); });
  c.m_p1 = moment_map(cfg, cfg.centers.back().position);
  c.source = ConstantSource::computed;
  return c;
}

double minor_of(const Mat3& R) { return R(1, 1) * R(2, 2) - R(1, 2) * R(2, 1); }

Vec3 lambda_obstruction(const Mat3& Rplus, const InstantonConstants& c) {
  // <R_+(I_1), I_i> = 2 R_1i under <omega_i, omega_j> = 2 delta_ij.
  return M_PI * c.vol_sigma / c.omega_norm2 * 2.0 * Rplus.row(0).transpose();
}

namespace {
void require_first_row_zero(const Mat3& Rplus) {
  const double norm = Rplus.row(0).norm();
  if (norm > 1e-8) throw FirstObstructionNonzero("first row of R_+ has norm " + std::to_string(norm));
}
}  // namespace

double mu1_generic(const Mat3& Rplus, const InstantonConstants& c) {
  require_first_row_zero(Rplus);
  return 4.0 * M_PI / c.omega_norm2 * minor_of(Rplus) * c.int_m_omega1;
}

double mu1_Ak(const Mat3& Rplus, double D, int k, const InstantonConstants& c) {
  require_first_row_zero(Rplus);
  return c.vol_sigma * c.vol_sigma / c.omega_norm2 * ((k + 1) * minor_of(Rplus) - (k - 1) * D / 16.0);
}

double A_coefficient(const Mat3& Rplus, double D, int k, const InstantonConstants& c) {
  require_first_row_zero(Rplus);
  return c.vol_sigma / (2.0 * M_PI) * (-(k - 1) * minor_of(Rplus) + (k + 1) * D / 16.0);
}

double A_coefficient_moment_form(const Mat3& Rplus, double D, int k, const InstantonConstants& c) {
  require_first_row_zero(Rplus);
  return 2.0 * minor_of(Rplus) * (c.m_p1 - c.int_m_omega1 / c.vol_sigma) +
         (k + 1) * c.vol_sigma / (2.0 * M_PI) * D / 16.0;
}

DetLeading det_leading(const Mat3& Rplus, double A, const std::vector<double>& t_values) {
  DetLeading out;
  const double minor = minor_of(Rplus);
  for (double t : t_values) {
    out.t.push_back(t);
    out.value.push_back(minor * A * std::pow(t, 4));
    Mat3 block = Mat3::Zero();
    block(0, 0) = A * t * t;
    block.bottomRightCorner<2, 2>() = t * Rplus.bottomRightCorner<2, 2>();
    out.block.push_back(block);
  }
  return out;
}

const char* to_string(WallSide side) {
  switch (side) {
    case WallSide::einstein_side: return "einstein_side";
    case WallSide::on_wall: return "on_wall";
    case WallSide::empty_side: return "empty_side";
  }
  return "on_wall";
}

double bold_determinant(const Mat3& Rplus) { return (-Rplus).determinant(); }

WallSide wall_side(double det_bold, double tol) {
  if (det_bold > tol) return WallSide::einstein_side;
  if (det_bold < -tol) return WallSide::empty_side;
  return WallSide::on_wall;
}

ObstructionReport compute_obstruction(const ObstructionRequest& request) {
  ObstructionReport report;
  const Jet2 H = request.gauge ? gauge_project(request.H, &report.gauge) : request.H;
  report.gauge_projected = request.gauge;
  report.constants = resolve_constants(request.setup);
  const CurvatureBlock block = curvature_from_jet2(H);
  report.Rplus_block = block.Rplus;
  report.lambda = lambda_obstruction(block.Rplus, report.constants);
  report.minor = minor_of(block.Rplus);
  report.det_bold = bold_determinant(block.Rplus);
  report.side = wall_side(report.det_bold, request.wall_tolerance);
  const bool first_row_zero = block.Rplus.row(0).norm() <= 1e-8;
  if (!first_row_zero) {
    if (request.H2) throw FirstObstructionNonzero("mu_1, D and A requested while lambda != 0");
    report.first_obstruction_status = "lambda nonzero";
    return report;
  }
  report.first_obstruction_status = "lambda zero";
  const int k = request.setup.k;
  if (request.setup.series != Series::A) {
    report.mu1 = mu1_generic(block.Rplus, report.constants);
    report.A = 0.0;
  } else if (request.H2) {
    // The quartic jet is tied to the input H; a cubic gauge change would also move H2.
    report.D = d2_invariant(request.H, *request.H2);
    report.mu1 = mu1_Ak(block.Rplus, *report.D, k, report.constants);
    report.A = A_coefficient(block.Rplus, *report.D, k, report.constants);
    report.A_moment_form = A_coefficient_moment_form(block.Rplus, *report.D, k, report.constants);
  } else {
    report.mu1 = mu1_generic(block.Rplus, report.constants);
  }
  if (report.A) report.det = det_leading(block.Rplus, *report.A, request.t_values);
  return report;
}

}  // namespace ale
