#pragma once

#include <vector>

namespace ale {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n - 1.
GaussRule gauss_legendre(int n, double a, double b);

// n equally spaced nodes on [0, 2 pi) with equal weights; exact for trigonometric
// polynomials of degree < n.
GaussRule periodic_rule(int n);

}  // namespace ale
