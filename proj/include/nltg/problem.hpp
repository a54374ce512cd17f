#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "nltg/space.hpp"

namespace nltg {

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Coefficients of -div a(x, u, grad u) + f(x, u, grad u) = 0 with zero
/// Dirichlet data, together with the first derivatives used by the
/// linearization. The functions must be pure; assembly calls them from
/// several threads at once.
struct ProblemDef {
  using VecFn = std::function<Vec2(Point2, double, Vec2)>;
  using MatFn = std::function<Mat2(Point2, double, Vec2)>;
  using ScalarFn = std::function<double(Point2, double, Vec2)>;

  std::string name;
  VecFn a;
  VecFn a_y;
  MatFn a_z;
  ScalarFn f;
  ScalarFn f_y;
  VecFn f_z;
  std::optional<std::function<PointValue(Point2)>> exact;
};

/// Manufactured solution x(1-x)^2 y(1-y) e^x with its gradient and Hessian.
struct McfExact {
  static double value(Point2 p);
  static Vec2 gradient(Point2 p);
  static Mat2 hessian(Point2 p);
  /// Source g = -div(grad u / sqrt(1 + |grad u|^2)) in closed form.
  static double source(Point2 p);
};

/// Mean curvature flow: a(z) = z / sqrt(1 + |z|^2), f = -g.
ProblemDef mean_curvature_problem();

/// -Laplace u - lambda e^u = g with manufactured solution x(1-x)y(1-y).
ProblemDef bratu_problem(double lambda);

/// Looks up "mcf" or "bratu" (lambda = 1).
ProblemDef problem_by_name(const std::string& id);

/// Smallest eigenvalue of the symmetric part of a_z over the default
/// assembly quadrature points, with the state's value and gradient plugged in.
double ellipticity_probe(const ProblemDef& problem, const StateVector& state, const FeSpace& space);

}  // namespace nltg
