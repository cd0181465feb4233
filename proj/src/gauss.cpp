#include "ale/gauss.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace ale {

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(n)), &gsl_integration_glfixed_table_free);
  if (!table) throw std::runtime_error("GSL failed to allocate a Gauss-Legendre table");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(a, b, static_cast<size_t>(i), &x, &w, table.get());
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
  }
  return rule;
}

GaussRule periodic_rule(int n) {
  if (n < 1) throw std::invalid_argument("periodic rule needs at least one node");
  GaussRule rule;
  const double step = 2.0 * M_PI / n;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(i * step);
    rule.weights.push_back(step);
  }
  return rule;
}

}  // namespace ale
