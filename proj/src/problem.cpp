#include "nltg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nltg/assembly.hpp"
#include "nltg/errors.hpp"

namespace nltg {

namespace {

// x(1-x)^2 e^x = p(x) e^x with p = x - 2x^2 + x^3.
struct XFactor {
  double v, d1, d2;
};

XFactor x_factor(double x) {
  const double p = x - 2.0 * x * x + x * x * x;
  const double p1 = 1.0 - 4.0 * x + 3.0 * x * x;
  const double p2 = -4.0 + 6.0 * x;
  const double ex = std::exp(x);
  return {p * ex, (p + p1) * ex, (p + 2.0 * p1 + p2) * ex};
}

}  // namespace

double McfExact::value(Point2 p) {
  return x_factor(p.x).v * p.y * (1.0 - p.y);
}

Vec2 McfExact::gradient(Point2 p) {
  const XFactor X = x_factor(p.x);
  const double Y = p.y * (1.0 - p.y);
  return {X.d1 * Y, X.v * (1.0 - 2.0 * p.y)};
}

Mat2 McfExact::hessian(Point2 p) {
  const XFactor X = x_factor(p.x);
  const double Y = p.y * (1.0 - p.y);
  const double Y1 = 1.0 - 2.0 * p.y;
  const double uxy = X.d1 * Y1;
  return {{{X.d2 * Y, uxy}, {uxy, -2.0 * X.v}}};
}

double McfExact::source(Point2 p) {
  const Vec2 g = gradient(p);
  const Mat2 H = hessian(p);
  const double q = 1.0 + g[0] * g[0] + g[1] * g[1];
  const double lap = H[0][0] + H[1][1];
  const double gHg = g[0] * (H[0][0] * g[0] + H[0][1] * g[1]) + g[1] * (H[1][0] * g[0] + H[1][1] * g[1]);
  return -(lap * q - gHg) / (q * std::sqrt(q));
}

ProblemDef mean_curvature_problem() {
  ProblemDef p;
  p.name = "mcf";
  p.a = [](Point2, double, Vec2 z) {
    const double s = 1.0 / std::sqrt(1.0 + z[0] * z[0] + z[1] * z[1]);
    return Vec2{z[0] * s, z[1] * s};
  };
  p.a_y = [](Point2, double, Vec2) { return Vec2{0.0, 0.0}; };
  p.a_z = [](Point2, double, Vec2 z) {
    const double q = 1.0 + z[0] * z[0] + z[1] * z[1];
    const double c = 1.0 / (q * std::sqrt(q));
    return Mat2{{{(q - z[0] * z[0]) * c, -z[0] * z[1] * c}, {-z[0] * z[1] * c, (q - z[1] * z[1]) * c}}};
  };
  p.f = [](Point2 x, double, Vec2) { return -McfExact::source(x); };
  p.f_y = [](Point2, double, Vec2) { return 0.0; };
  p.f_z = [](Point2, double, Vec2) { return Vec2{0.0, 0.0}; };
  p.exact = [](Point2 x) { return PointValue{McfExact::value(x), McfExact::gradient(x)}; };
  return p;
}

ProblemDef bratu_problem(double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("bratu_problem: lambda must be >= 0");
  auto u = [](Point2 x) { return x.x * (1.0 - x.x) * x.y * (1.0 - x.y); };
  // g = -Laplace u - lambda e^u
  auto g = [lambda, u](Point2 x) {
    const double minus_lap = 2.0 * (x.y * (1.0 - x.y) + x.x * (1.0 - x.x));
    return minus_lap - lambda * std::exp(u(x));
  };
  ProblemDef p;
  p.name = "bratu";
  p.a = [](Point2, double, Vec2 z) { return z; };
  p.a_y = [](Point2, double, Vec2) { return Vec2{0.0, 0.0}; };
  p.a_z = [](Point2, double, Vec2) { return Mat2{{{1.0, 0.0}, {0.0, 1.0}}}; };
  p.f = [lambda, g](Point2 x, double y, Vec2) { return -lambda * std::exp(y) - g(x); };
  p.f_y = [lambda](Point2, double y, Vec2) { return -lambda * std::exp(y); };
  p.f_z = [](Point2, double, Vec2) { return Vec2{0.0, 0.0}; };
  p.exact = [u](Point2 x) {
    return PointValue{u(x), {(1.0 - 2.0 * x.x) * x.y * (1.0 - x.y), x.x * (1.0 - x.x) * (1.0 - 2.0 * x.y)}};
  };
  return p;
}

ProblemDef problem_by_name(const std::string& id) {
  if (id == "mcf") return mean_curvature_problem();
  if (id == "bratu") return bratu_problem(1.0);
  throw InvalidArgument("unknown problem '" + id + "' (expected mcf or bratu)");
}

double ellipticity_probe(const ProblemDef& problem, const StateVector& state, const FeSpace& space) {
  if (!state.space || state.size() != static_cast<std::size_t>(space.num_dofs())) {
    throw InvalidArgument("ellipticity_probe: state does not match the space");
  }
  const QuadRule rule = quad_rule(assembly_quadrature_degree(space.degree()));
  double lowest = std::numeric_limits<double>::infinity();
  for (int t = 0; t < space.num_elements(); ++t) {
    const ElementGeometry geo = space.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const PointValue w = evaluate_on_triangle(state, t, rule.points[q]);
      const Mat2 m = problem.a_z(geo.map(rule.points[q]), w.value, w.gradient);
      const double a = m[0][0];
      const double d = m[1][1];
      const double b = 0.5 * (m[0][1] + m[1][0]);
      const double lmin = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
      lowest = std::min(lowest, lmin);
    }
  }
  return lowest;
}

}  // namespace nltg
