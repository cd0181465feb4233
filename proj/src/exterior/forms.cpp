#include "ale/exterior/forms.hpp"

#include <algorithm>
#include <cmath>

namespace ale {
namespace {

using IndexTable = std::array<std::vector<std::vector<int>>, 5>;

const IndexTable& index_table() {
  static const IndexTable table = [] {
    IndexTable t;
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<int> tuple;
      for (int i = 0; i < 4; ++i)
        if (mask & (1 << i)) tuple.push_back(i);
      t[tuple.size()].push_back(tuple);
    }
    for (auto& group : t) std::sort(group.begin(), group.end());
    return t;
  }();
  return table;
}

int permutation_sign(const std::vector<int>& seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) sign = -sign;
    }
  return sign;
}

std::vector<int> complement(const std::vector<int>& tuple) {
  std::vector<int> out;
  for (int i = 0; i < 4; ++i)
    if (std::find(tuple.begin(), tuple.end(), i) == tuple.end()) out.push_back(i);
  return out;
}

double minor_det(const Mat4& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) return 1.0;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4> sub(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sub(i, j) = m(rows[i], cols[j]);
  return sub.determinant();
}

// Matrix of the metric induced on degree-p forms by the inverse metric.
Eigen::Matrix<double, 6, 6> raise_matrix(const Mat4& inverse_metric, int degree) {
  const auto& tuples = index_table()[degree];
  const int n = static_cast<int>(tuples.size());
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = minor_det(inverse_metric, tuples[i], tuples[j]);
  return m;
}

Mat4 checked_inverse(const Mat4& metric, double* det_out) {
  const double det = metric.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) throw SingularMetric("metric determinant is not positive");
  if (det_out) *det_out = det;
  return metric.inverse();
}

}  // namespace

Form::Form(int deg) : degree(deg) {
  if (deg < 0 || deg > 4) throw std::invalid_argument("form degree must be in 0..4");
}

int Form::size(int degree) {
  static constexpr int sizes[5] = {1, 4, 6, 4, 1};
  return sizes[degree];
}

Form& Form::operator+=(const Form& other) {
  for (int i = 0; i < 6; ++i) c[i] += other.c[i];
  return *this;
}
Form& Form::operator-=(const Form& other) {
  for (int i = 0; i < 6; ++i) c[i] -= other.c[i];
  return *this;
}
Form& Form::operator*=(double s) {
  for (auto& v : c) v *= s;
  return *this;
}
double Form::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = std::max(m, std::abs(c[i]));
  return m;
}

Form operator+(Form a, const Form& b) { return a += b; }
Form operator-(Form a, const Form& b) { return a -= b; }
Form operator-(Form a) { return a *= -1.0; }
Form operator*(double s, Form a) { return a *= s; }
Form operator*(Form a, double s) { return a *= s; }

const std::vector<int>& form_indices(int degree, int slot) { return index_table()[degree][slot]; }

int form_slot(const std::vector<int>& sorted_indices) {
  const auto& group = index_table()[sorted_indices.size()];
  auto it = std::lower_bound(group.begin(), group.end(), sorted_indices);
  return static_cast<int>(it - group.begin());
}

Form scalar_form(double value) {
  Form f(0);
  f[0] = value;
  return f;
}

Form one_form(const Vec4& covector) {
  Form f(1);
  for (int i = 0; i < 4; ++i) f[i] = covector[i];
  return f;
}

Vec4 as_covector(const Form& one) { return Vec4(one[0], one[1], one[2], one[3]); }

Form two_form(const Mat4& m) {
  Form f(2);
  for (int s = 0; s < 6; ++s) {
    const auto& ij = form_indices(2, s);
    f[s] = 0.5 * (m(ij[0], ij[1]) - m(ij[1], ij[0]));
  }
  return f;
}

Mat4 as_matrix(const Form& two) {
  Mat4 m = Mat4::Zero();
  for (int s = 0; s < 6; ++s) {
    const auto& ij = form_indices(2, s);
    m(ij[0], ij[1]) = two[s];
    m(ij[1], ij[0]) = -two[s];
  }
  return m;
}

Form dx_wedge(int a, int b) {
  Form f(2);
  if (a == b) return f;
  f[form_slot({std::min(a, b), std::max(a, b)})] = a < b ? 1.0 : -1.0;
  return f;
}

Form wedge(const Form& a, const Form& b) {
  const int deg = a.degree + b.degree;
  Form out(deg > 4 ? 0 : deg);
  if (deg > 4) return out;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < b.size(); ++j) {
      if (b[j] == 0.0) continue;
      std::vector<int> seq = form_indices(a.degree, i);
      const auto& right = form_indices(b.degree, j);
      seq.insert(seq.end(), right.begin(), right.end());
      const int sign = permutation_sign(seq);
      if (sign == 0) continue;
      std::sort(seq.begin(), seq.end());
      out[form_slot(seq)] += sign * a[i] * b[j];
    }
  }
  return out;
}

Form interior(const Vec4& v, const Form& form) {
  if (form.degree == 0) return Form(0);
  Form out(form.degree - 1);
  for (int s = 0; s < form.size(); ++s) {
    const auto& tuple = form_indices(form.degree, s);
    for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
      std::vector<int> rest = tuple;
      rest.erase(rest.begin() + static_cast<long>(pos));
      const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      out[form_slot(rest)] += sign * v[tuple[pos]] * form[s];
    }
  }
  return out;
}

Form hodge_star(const Mat4& metric, const Form& form) {
  double det = 0.0;
  const Mat4 inv = checked_inverse(metric, &det);
  const int p = form.degree;
  const auto raise = raise_matrix(inv, p);
  Form out(4 - p);
  const double root = std::sqrt(det);
  for (int s = 0; s < out.size(); ++s) {
    const auto& target = form_indices(4 - p, s);
    const auto source = complement(target);
    std::vector<int> seq = source;
    seq.insert(seq.end(), target.begin(), target.end());
    const int src = form_slot(source);
    double raised = 0.0;
    for (int k = 0; k < form.size(); ++k) raised += raise(src, k) * form[k];
    out[s] = root * permutation_sign(seq) * raised;
  }
  return out;
}

double inner(const Mat4& metric, const Form& a, const Form& b) {
  const Mat4 inv = checked_inverse(metric, nullptr);
  const auto raise = raise_matrix(inv, a.degree);
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) s += a[i] * raise(i, j) * b[j];
  return s;
}

double norm(const Mat4& metric, const Form& a) { return std::sqrt(std::max(0.0, inner(metric, a, a))); }

double wedge_top(const Form& a, const Form& b) { return wedge(a, b)[0]; }

SdSplit split_sd(const Mat4& metric, const Form& two) {
  const Form star = hodge_star(metric, two);
  return {0.5 * (two + star), 0.5 * (two - star)};
}

const std::array<Form, 3>& flat_sd_basis() {
  static const std::array<Form, 3> basis = {dx_wedge(0, 1) + dx_wedge(2, 3), dx_wedge(0, 2) - dx_wedge(1, 3),
                                            dx_wedge(0, 3) + dx_wedge(1, 2)};
  return basis;
}

const std::array<Form, 3>& flat_asd_basis() {
  static const std::array<Form, 3> basis = {dx_wedge(0, 1) - dx_wedge(2, 3), dx_wedge(0, 2) + dx_wedge(1, 3),
                                            dx_wedge(0, 3) - dx_wedge(1, 2)};
  return basis;
}

Mat4 complex_structure(const Mat4& metric, const Form& two) {
  return -checked_inverse(metric, nullptr) * as_matrix(two);
}

Vec4 apply_J(const Mat4& metric, const Form& two, const Vec4& covector) {
  return -as_matrix(two) * checked_inverse(metric, nullptr) * covector;
}

namespace {
std::array<Form, 3> projected_frame(const Mat4& metric, bool self_dual) {
  const auto& seeds = self_dual ? flat_sd_basis() : flat_asd_basis();
  std::array<Form, 3> out;
  for (int i = 0; i < 3; ++i) {
    const SdSplit parts = split_sd(metric, seeds[i]);
    Form f = self_dual ? parts.sd : parts.asd;
    for (int j = 0; j < i; ++j) f -= (inner(metric, f, out[j]) / 2.0) * out[j];
    const double n2 = inner(metric, f, f);
    if (!(n2 > 1e-300)) throw SingularMetric("degenerate projected 2-form frame");
    out[i] = std::sqrt(2.0 / n2) * f;
  }
  return out;
}
}  // namespace

std::array<Form, 3> sd_frame(const Mat4& metric) { return projected_frame(metric, true); }
std::array<Form, 3> asd_frame(const Mat4& metric) { return projected_frame(metric, false); }

Form fd_d(const FormField& field, const Vec4& p, const FdScheme& fd) {
  std::array<Form, 4> partial;
  try {
    for (int a = 0; a < 4; ++a) partial[a] = fd_partial(field.eval, p, a, fd);
  } catch (const CenterTooClose& e) {
    throw EvaluationDomain(std::string("finite-difference stencil left the chart: ") + e.what());
  } catch (const OnDiracString& e) {
    throw EvaluationDomain(std::string("finite-difference stencil left the chart: ") + e.what());
  }
  const int p_deg = field.degree;
  Form out(p_deg + 1);
  if (p_deg >= 4) return Form(0);
  for (int s = 0; s < out.size(); ++s) {
    const auto& tuple = form_indices(p_deg + 1, s);
    double v = 0.0;
    for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
      std::vector<int> rest = tuple;
      rest.erase(rest.begin() + static_cast<long>(pos));
      const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      v += sign * partial[tuple[pos]][form_slot(rest)];
    }
    out[s] = v;
  }
  return out;
}

Form fd_codifferential(const FormField& field, const MetricField& metric, const Vec4& p, const FdScheme& fd) {
  FormField starred{4 - field.degree, [&](const Vec4& x) { return hodge_star(metric(x), field(x)); }};
  const Form d_star = fd_d(starred, p, fd);
  return -hodge_star(metric(p), d_star);
}

double duality_residual(const FormField& field, const MetricField& metric, const std::vector<Vec4>& points) {
  if (field.degree != 2 || field.duality == Duality::none) return 0.0;
  const double sign = field.duality == Duality::self_dual ? 1.0 : -1.0;
  double worst = 0.0;
  for (const auto& x : points) {
    const Form w = field(x);
    worst = std::max(worst, (hodge_star(metric(x), w) - sign * w).max_abs());
  }
  return worst;
}

}  // namespace ale
