#include "nltg/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "nltg/errors.hpp"

namespace nltg {

void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

void add_orbit3(QuadRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({b, a, a});
  rule.points.push_back({a, b, a});
  rule.points.push_back({a, a, b});
  for (int k = 0; k < 3; ++k) rule.weights.push_back(w);
}

QuadRule collapsed_product(int m) {
  std::vector<double> s;
  std::vector<double> ws;
  gauss_legendre_01(m, s, ws);
  QuadRule rule;
  rule.exactness_degree = 2 * m - 2;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      // (x, y) = (s_i, (1 - s_i) t_j); the factor (1 - s_i) is the Duffy Jacobian.
      const double x = s[i];
      const double y = (1.0 - s[i]) * s[j];
      rule.points.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(2.0 * ws[i] * ws[j] * (1.0 - s[i]));
    }
  }
  return rule;
}

}  // namespace

QuadRule quad_rule(int exactness_degree) {
  if (exactness_degree < 1 || exactness_degree > 12) {
    throw InvalidArgument("quad_rule: exactness degree must lie in [1, 12]");
  }
  QuadRule rule;
  if (exactness_degree == 1) {
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(1.0);
    rule.exactness_degree = 1;
  } else if (exactness_degree == 2) {
    add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
    rule.exactness_degree = 2;
  } else if (exactness_degree <= 5) {
    // Radon's 7-point rule.
    const double r15 = std::sqrt(15.0);
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(9.0 / 40.0);
    add_orbit3(rule, (6.0 - r15) / 21.0, (155.0 - r15) / 1200.0);
    add_orbit3(rule, (6.0 + r15) / 21.0, (155.0 + r15) / 1200.0);
    rule.exactness_degree = 5;
  } else {
    rule = collapsed_product((exactness_degree + 3) / 2);
  }
  return rule;
}

}  // namespace nltg
