#include <doctest.h>

#include <random>

#include "nltg/assembly.hpp"
#include "nltg/errors.hpp"
#include "nltg/linsolve.hpp"
#include "oracles.hpp"

using namespace nltg;

namespace {

ProblemDef laplace_with_source(double f_const) {
  ProblemDef p;
  p.name = "laplace";
  p.a = [](Point2, double, Vec2 z) { return z; };
  p.a_y = [](Point2, double, Vec2) { return Vec2{0.0, 0.0}; };
  p.a_z = [](Point2, double, Vec2) { return Mat2{{{1.0, 0.0}, {0.0, 1.0}}}; };
  p.f = [f_const](Point2, double, Vec2) { return f_const; };
  p.f_y = [](Point2, double, Vec2) { return 0.0; };
  p.f_z = [](Point2, double, Vec2) { return Vec2{0.0, 0.0}; };
  return p;
}

/// A problem exercising every term of the linearization, including the
/// nonsymmetric couplings a_y and f_z.
ProblemDef fully_coupled() {
  ProblemDef p;
  p.name = "coupled";
  p.a = [](Point2 x, double y, Vec2 z) {
    return Vec2{(1.0 + y * y) * z[0] + 0.3 * std::sin(y) + x.x * z[1] * 0.1, (1.0 + y * y) * z[1] + 0.2 * y};
  };
  p.a_y = [](Point2, double y, Vec2 z) {
    return Vec2{2.0 * y * z[0] + 0.3 * std::cos(y), 2.0 * y * z[1] + 0.2};
  };
  p.a_z = [](Point2 x, double y, Vec2) { return Mat2{{{1.0 + y * y, 0.1 * x.x}, {0.0, 1.0 + y * y}}}; };
  p.f = [](Point2 x, double y, Vec2 z) { return y * y * y + 0.5 * z[0] * z[1] - x.y; };
  p.f_y = [](Point2, double y, Vec2) { return 3.0 * y * y; };
  p.f_z = [](Point2, double, Vec2 z) { return Vec2{0.5 * z[1], 0.5 * z[0]}; };
  return p;
}

StateVector random_state(const SpacePtr& s, std::mt19937& rng, double amplitude) {
  std::uniform_real_distribution<double> val(-amplitude, amplitude);
  StateVector w(s);
  for (double& c : w.coefficients) c = val(rng);
  return zero_boundary(std::move(w));
}

double jacobian_mismatch(const FeSpace& space, const ProblemDef& p, const StateVector& w, const StateVector& d,
                         double eps) {
  StateVector wp = w;
  for (std::size_t i = 0; i < wp.size(); ++i) wp.coefficients[i] += eps * d.coefficients[i];
  const auto r0 = assemble_residual(space, p, w);
  const auto r1 = assemble_residual(space, p, wp);
  const auto Bd = oracle::matvec(oracle::to_dense(assemble_linearized(space, p, w)), d.coefficients);
  std::vector<double> diff(r0.size());
  for (std::size_t i = 0; i < r0.size(); ++i) diff[i] = (r1[i] - r0[i]) / eps - Bd[i];
  return oracle::norm2(diff) / oracle::norm2(Bd);
}

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("Poisson without source at zero gives a zero residual") {
    auto s = build_space(uniform_triangulation(4), 2);
    const auto R = assemble_residual(*s, laplace_with_source(0.0), StateVector(s));
    CHECK(std::all_of(R.begin(), R.end(), [](double v) { return v == 0.0; }));
  }

  TEST_CASE("constant source integrates the hat function") {
    auto s = build_space(uniform_triangulation(2), 1);
    const auto R = assemble_residual(*s, laplace_with_source(-1.0), StateVector(s));
    // interior vertex (1/2, 1/2) touches 6 triangles of area 1/8
    CHECK(R[4] == doctest::Approx(-0.25).epsilon(1e-14));
    for (int i = 0; i < s->num_dofs(); ++i) {
      if (s->is_boundary(i)) CHECK(R[i] == 0.0);
    }
  }

  TEST_CASE("P1 Laplace matrix is the five-point stencil") {
    const int n = 6;
    auto s = build_space(uniform_triangulation(n), 1);
    const SparseMatrix B = assemble_linearized(*s, laplace_with_source(0.0), StateVector(s));
    for (int j = 2; j < n - 1; ++j) {
      for (int i = 2; i < n - 1; ++i) {
        const int v = j * (n + 1) + i;
        CHECK(B.at(v, v) == doctest::Approx(4.0));
        CHECK(B.at(v, v - 1) == doctest::Approx(-1.0));
        CHECK(B.at(v, v + 1) == doctest::Approx(-1.0));
        CHECK(B.at(v, v - (n + 1)) == doctest::Approx(-1.0));
        CHECK(B.at(v, v + (n + 1)) == doctest::Approx(-1.0));
        CHECK(std::abs(B.at(v, v + (n + 2))) < 1e-14);
        CHECK(std::abs(B.at(v, v - (n + 2))) < 1e-14);
      }
    }
  }

  TEST_CASE("reference-shaped P1 element matrix") {
    // P1 stiffness is scale invariant in 2D, so a shrunken interior copy of
    // the reference triangle keeps its element matrix and has no boundary dofs.
    auto mesh = std::make_shared<TriMesh>();
    mesh->subdivision = 1;
    mesh->vertices = {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}};
    mesh->boundary_vertex = {false, false, false};
    mesh->triangles = {{0, 1, 2}};
    auto s = build_space(mesh, 1);
    const auto B = oracle::to_dense(assemble_linearized(*s, laplace_with_source(0.0), StateVector(s)));
    const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(B[i][j] - expected[i][j]) < 1e-14);
  }

  TEST_CASE("Jacobian matches finite differences of the residual") {
    std::mt19937 rng(99);
    for (const ProblemDef& p : {mean_curvature_problem(), bratu_problem(1.0), fully_coupled()}) {
      for (int r = 1; r <= 3; ++r) {
        auto s = build_space(uniform_triangulation(4), r);
        for (int trial = 0; trial < 3; ++trial) {
          const StateVector w = random_state(s, rng, 0.1);
          const StateVector d = random_state(s, rng, 0.1);
          CAPTURE(p.name);
          CAPTURE(r);
          CHECK(jacobian_mismatch(*s, p, w, d, 1e-6) < 1e-5);
        }
      }
    }
  }

  TEST_CASE("Dirichlet structure") {
    std::mt19937 rng(1);
    auto s = build_space(uniform_triangulation(5), 2);
    const StateVector w = random_state(s, rng, 0.1);
    const auto R = assemble_residual(*s, fully_coupled(), w);
    const SparseMatrix B = assemble_linearized(*s, fully_coupled(), w);
    for (int i = 0; i < s->num_dofs(); ++i) {
      for (int k = B.row_offsets[i]; k < B.row_offsets[i + 1]; ++k) {
        const int j = B.col_indices[k];
        if (s->is_boundary(i) || s->is_boundary(j)) CHECK(B.values[k] == (i == j ? 1.0 : 0.0));
        if (k > B.row_offsets[i]) CHECK(B.col_indices[k - 1] < j);
        CHECK(B.at(j, i) == B.at(j, i));  // structure symmetric: lookup must not throw
      }
      if (s->is_boundary(i)) CHECK(R[i] == 0.0);
    }
    // pattern symmetry
    const SparseMatrix Bt = B.transpose();
    CHECK(Bt.row_offsets == B.row_offsets);
    CHECK(Bt.col_indices == B.col_indices);
  }

  TEST_CASE("the matrix is symmetric when only a_z couples") {
    std::mt19937 rng(2);
    auto s = build_space(uniform_triangulation(6), 3);
    const StateVector w = random_state(s, rng, 0.1);
    for (const ProblemDef& p : {laplace_with_source(1.0), mean_curvature_problem()}) {
      const SparseMatrix B = assemble_linearized(*s, p, w);
      const SparseMatrix Bt = B.transpose();
      double worst = 0.0;
      for (std::size_t k = 0; k < B.nnz(); ++k) worst = std::max(worst, std::abs(B.values[k] - Bt.values[k]));
      CHECK(worst < 1e-13);
    }
  }

  TEST_CASE("parallel assembly is bit-identical to the serial reference and reproducible") {
    std::mt19937 rng(3);
    for (int r = 1; r <= 3; ++r) {
      auto s = build_space(uniform_triangulation(7), r);
      const StateVector w = random_state(s, rng, 0.2);
      for (const ProblemDef& p : {mean_curvature_problem(), fully_coupled()}) {
        const auto Rs = assemble_residual(*s, p, w, Exec::serial);
        const auto Rp = assemble_residual(*s, p, w, Exec::parallel);
        CHECK(Rs == Rp);
        CHECK(assemble_residual(*s, p, w) == Rp);
        const SparseMatrix Bs = assemble_linearized(*s, p, w, Exec::serial);
        const SparseMatrix Bp = assemble_linearized(*s, p, w, Exec::parallel);
        CHECK(Bs.values == Bp.values);
        CHECK(Bs.col_indices == Bp.col_indices);
        CHECK(assemble_linearized(*s, p, w).values == Bp.values);
      }
    }
  }

  TEST_CASE("residual of the interpolated solution decays at the consistency order") {
    // Entries scale like h^2 * O(h^2) on uniform meshes and there are O(h^-2)
    // of them: the plain l2 norm falls like h^3, the h-scaled one like h^2.
    const ProblemDef p = mean_curvature_problem();
    auto norm_at = [&](int n) {
      auto s = build_space(uniform_triangulation(n), 1);
      return oracle::norm2(assemble_residual(*s, p, zero_boundary(interpolate(s, McfExact::value))));
    };
    const double ratio = norm_at(16) / norm_at(32);
    CHECK(std::log2(ratio) == doctest::Approx(3.0).epsilon(0.1));
    CHECK(ratio / 2.0 == doctest::Approx(4.0).epsilon(0.1));
  }

  TEST_CASE("state from another space is rejected") {
    auto a = build_space(uniform_triangulation(3), 1);
    auto b = build_space(uniform_triangulation(4), 1);
    CHECK_THROWS_AS(assemble_residual(*a, mean_curvature_problem(), StateVector(b)), InvalidArgument);
    CHECK_THROWS_AS(assemble_linearized(*a, mean_curvature_problem(), StateVector(b)), InvalidArgument);
  }
}
