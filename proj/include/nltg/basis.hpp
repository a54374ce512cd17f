#pragma once

#include <array>
#include <vector>

#include "nltg/quadrature.hpp"

namespace nltg {

/// Lagrange basis of degree 1-3 on a triangle, written in barycentric
/// coordinates. Local ordering: the three vertices, then the nodes of edges
/// (0,1), (1,2), (2,0) (for cubics, the node nearer the first endpoint
/// first), then the interior node.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Barycentric coordinates of the local nodes.
  const std::vector<Barycentric>& nodes() const { return nodes_; }

  /// values[i] and d_lambda[i][k] = d(phi_i)/d(lambda_k) at `b`.
  void evaluate(const Barycentric& b, double* values, std::array<double, 3>* d_lambda) const;

 private:
  int degree_;
  std::vector<Barycentric> nodes_;
};

/// Local edges as pairs of local vertices.
inline constexpr std::array<std::array<int, 2>, 3> kLocalEdges{{{0, 1}, {1, 2}, {2, 0}}};

inline int local_dof_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

}  // namespace nltg
