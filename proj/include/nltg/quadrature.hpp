#pragma once

#include <array>
#include <vector>

namespace nltg {

using Barycentric = std::array<double, 3>;

/// Quadrature on a triangle in barycentric coordinates. Weights sum to 1 and
/// are multiplied by the triangle area at the use site.
struct QuadRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  std::size_t size() const { return points.size(); }
};

/// Cheapest built-in rule that integrates every polynomial of total degree
/// <= `exactness_degree` exactly (1 <= degree <= 12). The returned rule
/// reports its actual degree, which may exceed the request.
///
/// Degrees 1, 2 and 3-5 use the symmetric centroid, 3-point and 7-point
/// rules. Higher degrees use a collapsed Gauss-Legendre product rule.
QuadRule quad_rule(int exactness_degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace nltg
