#pragma once

#include "ale/core.hpp"

#include <string>
#include <utility>

namespace ale {

enum class Duality { none, self_dual, anti_self_dual };

// Differential form on a 4-dimensional chart, stored on increasing index tuples.
// Slot order: degree 1 -> (0),(1),(2),(3); degree 2 -> 01,02,03,12,13,23;
// degree 3 -> 012,013,023,123; degree 4 -> 0123.
struct Form {
  int degree = 0;
  std::array<double, 6> c{};

  Form() = default;
  explicit Form(int deg);

  static int size(int degree);
  int size() const { return size(degree); }
  double& operator[](int slot) { return c[static_cast<std::size_t>(slot)]; }
  double operator[](int slot) const { return c[static_cast<std::size_t>(slot)]; }

  Form& operator+=(const Form& other);
  Form& operator-=(const Form& other);
  Form& operator*=(double s);
  double max_abs() const;
};

Form operator+(Form a, const Form& b);
Form operator-(Form a, const Form& b);
Form operator-(Form a);
Form operator*(double s, Form a);
Form operator*(Form a, double s);

const std::vector<int>& form_indices(int degree, int slot);
int form_slot(const std::vector<int>& sorted_indices);

Form scalar_form(double value);
Form one_form(const Vec4& covector);
Vec4 as_covector(const Form& one);
Form two_form(const Mat4& antisymmetric);
Mat4 as_matrix(const Form& two);
Form dx_wedge(int a, int b);

Form wedge(const Form& a, const Form& b);
Form interior(const Vec4& vector, const Form& form);

using MetricField = std::function<Mat4(const Vec4&)>;

Form hodge_star(const Mat4& metric, const Form& form);
// Pointwise inner product with <dx^I, dx^J> summed over increasing tuples,
// so that |dx^0 ^ dx^1 + dx^2 ^ dx^3|^2 = 2 for the euclidean metric.
double inner(const Mat4& metric, const Form& a, const Form& b);
double norm(const Mat4& metric, const Form& a);
// Top-degree coefficient of a ^ b for two 2-forms.
double wedge_top(const Form& a, const Form& b);

struct SdSplit {
  Form sd;
  Form asd;
};
SdSplit split_sd(const Mat4& metric, const Form& two);

// Flat triples: omega_1 = dx01 + dx23, omega_2 = dx02 - dx13, omega_3 = dx03 + dx12
// and their anti-self-dual partners theta_i.
const std::array<Form, 3>& flat_sd_basis();
const std::array<Form, 3>& flat_asd_basis();

// Almost-complex structure J with omega(X, Y) = g(JX, Y), and its action on covectors.
Mat4 complex_structure(const Mat4& metric, const Form& two);
Vec4 apply_J(const Mat4& metric, const Form& two, const Vec4& covector);

// Orthonormal frames of Lambda^+ / Lambda^- for a metric (norm^2 = 2),
// obtained by projecting the flat triples and Gram-Schmidt.
std::array<Form, 3> sd_frame(const Mat4& metric);
std::array<Form, 3> asd_frame(const Mat4& metric);

struct FormField {
  int degree = 0;
  std::function<Form(const Vec4&)> eval;
  Duality duality = Duality::none;
  std::string label;

  Form operator()(const Vec4& x) const { return eval(x); }
};

struct FdScheme {
  double h = 1e-3;
  bool richardson = false;
};

// Centered-difference partial derivative of any vector-space valued map.
template <class F>
auto fd_partial(const F& fn, const Vec4& p, int axis, const FdScheme& fd) -> decltype(fn(p)) {
  auto central = [&](double h) {
    Vec4 plus = p, minus = p;
    plus[axis] += h;
    minus[axis] -= h;
    using Value = decltype(fn(p));
    const Value upper = fn(plus), lower = fn(minus);
    return Value((upper - lower) * (0.5 / h));
  };
  if (!fd.richardson) return central(fd.h);
  auto coarse = central(fd.h);
  auto fine = central(0.5 * fd.h);
  return decltype(fn(p))((fine * 4.0 - coarse) * (1.0 / 3.0));
}

Form fd_d(const FormField& field, const Vec4& p, const FdScheme& fd = {});
// Codifferential d* = -*d* for the supplied metric field.
Form fd_codifferential(const FormField& field, const MetricField& metric, const Vec4& p,
                       const FdScheme& fd = {});
// Max of |*w -+ w| over points, according to the duality tag.
double duality_residual(const FormField& field, const MetricField& metric,
                        const std::vector<Vec4>& points);

}  // namespace ale
