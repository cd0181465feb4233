#pragma once

#include "ale/obstruction.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace ale_test {

// Polynomial in x^0..x^3 truncated above total degree 4; products drop higher terms exactly.
class Poly {
 public:
  static constexpr int max_degree = 4;
  static constexpr int terms = 70;

  Poly() { coeff_.fill(0.0); }
  static Poly constant(double value);
  static Poly monomial(const std::array<int, 4>& exponents, double value = 1.0);

  double coefficient(const std::array<int, 4>& exponents) const;
  Poly derivative(int axis) const;
  double eval(const ale::Vec4& x) const;

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(double s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, double s) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);

 private:
  std::array<double, terms> coeff_;
};

// Exact Taylor expansion of the curvature of euc + H + H2 about the origin.
struct SymbolicJet {
  std::array<std::array<Poly, 4>, 4> g, g_inv;
  std::array<Poly, 64> christoffel;  // Gamma^a_bc at 16a + 4b + c
  std::array<Poly, 256> riemann;     // R_abcd, same layout as ale::Tensor4

  SymbolicJet(const ale::Jet2& H, const ale::Jet4* H2);
  ale::Tensor4 riemann_at(const ale::Vec4& x) const;
};

// D from the exact expansion: full covariant derivative nabla_a (nabla R)_a at the origin.
double symbolic_d2(const ale::Jet2& H, const ale::Jet4& H2);

// Seeded jet builders.
ale::Jet2 random_jet2(std::uint64_t seed, double scale = 1.0);
ale::Jet4 random_jet4(std::uint64_t seed, double scale = 0.3);
ale::Mat3 random_symmetric(std::uint64_t seed, double scale = 1.0);
// Symmetric block with vanishing first row and column.
ale::Mat3 random_first_row_zero(std::uint64_t seed);
// Normal-coordinate jet of the blocks, plus a random cubic gauge term.
ale::Jet2 jet_from_blocks(const ale::Mat3& Rplus, const ale::Mat3& Rminus, std::uint64_t gauge_seed,
                          double gauge_scale = 0.5);
std::vector<double> random_field(std::uint64_t seed, std::size_t size, double scale = 1.0);

}  // namespace ale_test
