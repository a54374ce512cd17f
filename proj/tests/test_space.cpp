#include <doctest.h>

#include <random>
#include <set>

#include "nltg/errors.hpp"
#include "nltg/problem.hpp"
#include "nltg/space.hpp"
#include "oracles.hpp"

using namespace nltg;

TEST_SUITE("quadrature") {
  TEST_CASE("centroid and three-point rules") {
    const QuadRule r1 = quad_rule(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1.weights[0] == 1.0);
    CHECK(r1.points[0][0] == doctest::Approx(1.0 / 3.0));
    CHECK(r1.exactness_degree == 1);

    const QuadRule r2 = quad_rule(2);
    REQUIRE(r2.size() == 3);
    std::set<double> firsts;
    for (std::size_t q = 0; q < 3; ++q) {
      CHECK(r2.weights[q] == doctest::Approx(1.0 / 3.0));
      std::vector<double> b(r2.points[q].begin(), r2.points[q].end());
      std::sort(b.begin(), b.end());
      CHECK(b[0] == doctest::Approx(1.0 / 6.0));
      CHECK(b[1] == doctest::Approx(1.0 / 6.0));
      CHECK(b[2] == doctest::Approx(2.0 / 3.0));
    }
  }

  TEST_CASE("every rule integrates monomials up to its degree exactly") {
    for (int d = 1; d <= 12; ++d) {
      const QuadRule rule = quad_rule(d);
      CAPTURE(d);
      CHECK(rule.exactness_degree >= d);
      double wsum = 0.0;
      for (double w : rule.weights) {
        CHECK(w > 0.0);
        wsum += w;
      }
      CHECK(std::abs(wsum - 1.0) < 1e-14);
      for (int a = 0; a <= rule.exactness_degree; ++a) {
        for (int b = 0; a + b <= rule.exactness_degree; ++b) {
          double q = 0.0;
          for (std::size_t k = 0; k < rule.size(); ++k) {
            // reference triangle (0,0),(1,0),(0,1): x = lambda_1, y = lambda_2, area 1/2
            q += 0.5 * rule.weights[k] * std::pow(rule.points[k][1], a) * std::pow(rule.points[k][2], b);
          }
          CAPTURE(a);
          CAPTURE(b);
          CHECK(std::abs(q - oracle::reference_moment(a, b)) < 1e-13);
        }
      }
    }
  }

  TEST_CASE("unsupported degrees") {
    CHECK_THROWS_AS(quad_rule(0), InvalidArgument);
    CHECK_THROWS_AS(quad_rule(13), InvalidArgument);
  }
}

TEST_SUITE("space") {
  TEST_CASE("dof counts") {
    auto s = build_space(uniform_triangulation(2), 1);
    CHECK(s->num_dofs() == 9);
    CHECK(std::count(s->boundary_dof_mask().begin(), s->boundary_dof_mask().end(), true) == 8);

    for (int n : {1, 2, 3, 8}) {
      for (int r = 1; r <= 3; ++r) {
        auto sp = build_space(uniform_triangulation(n), r);
        CHECK(sp->num_dofs() == (r * n + 1) * (r * n + 1));
        CHECK(sp->dofs_per_element() == (r + 1) * (r + 2) / 2);
      }
    }
    CHECK(build_space(uniform_triangulation(8), 3)->num_dofs() == 625);
    CHECK_THROWS_AS(build_space(uniform_triangulation(2), 4), InvalidArgument);
    CHECK_THROWS_AS(build_space(uniform_triangulation(2), 0), InvalidArgument);
  }

  TEST_CASE("P2 on n = 1 has one interior dof at the diagonal midpoint") {
    auto s = build_space(uniform_triangulation(1), 2);
    CHECK(s->num_dofs() == 9);
    int interior = -1;
    int count = 0;
    for (int i = 0; i < s->num_dofs(); ++i) {
      if (!s->is_boundary(i)) {
        interior = i;
        ++count;
      }
    }
    REQUIRE(count == 1);
    CHECK(s->dof_points()[interior].x == doctest::Approx(0.5));
    CHECK(s->dof_points()[interior].y == doctest::Approx(0.5));
  }

  TEST_CASE("dof points are distinct, boundary mask matches coordinates, vertices come first") {
    for (int r = 1; r <= 3; ++r) {
      auto s = build_space(uniform_triangulation(4), r);
      std::set<std::pair<long long, long long>> seen;
      for (int i = 0; i < s->num_dofs(); ++i) {
        const Point2 p = s->dof_points()[i];
        seen.insert({std::llround(p.x * 1e9), std::llround(p.y * 1e9)});
        const bool bd = p.x < 1e-12 || p.y < 1e-12 || p.x > 1 - 1e-12 || p.y > 1 - 1e-12;
        CHECK(bd == s->is_boundary(i));
      }
      CHECK(static_cast<int>(seen.size()) == s->num_dofs());
      for (std::size_t v = 0; v < s->mesh().num_vertices(); ++v) {
        CHECK(s->dof_points()[v].x == s->mesh().vertices[v].x);
        CHECK(s->dof_points()[v].y == s->mesh().vertices[v].y);
      }
      std::vector<int> used(s->num_dofs(), 0);
      for (int t = 0; t < s->num_elements(); ++t) {
        for (int d : s->element_dofs(t)) ++used[d];
      }
      CHECK(std::all_of(used.begin(), used.end(), [](int u) { return u > 0; }));
    }
  }

  TEST_CASE("Lagrange property and partition of unity") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int r = 1; r <= 3; ++r) {
      auto s = build_space(uniform_triangulation(3), r);
      for (int t : {0, 5, 17}) {
        const auto dofs = s->element_dofs(t);
        const auto& nodes = s->basis().nodes();
        for (std::size_t a = 0; a < nodes.size(); ++a) {
          const BasisEval e = eval_basis(*s, t, nodes[a]);
          for (std::size_t b = 0; b < nodes.size(); ++b) {
            CHECK(std::abs(e.values[b] - (a == b ? 1.0 : 0.0)) < 1e-14);
          }
          // node a of the element sits at the global dof point
          const Point2 x = s->geometry(t).map(nodes[a]);
          CHECK(std::abs(x.x - s->dof_points()[dofs[a]].x) < 1e-14);
          CHECK(std::abs(x.y - s->dof_points()[dofs[a]].y) < 1e-14);
        }
        for (int trial = 0; trial < 20; ++trial) {
          double l1 = u01(rng), l2 = u01(rng);
          if (l1 + l2 > 1.0) {
            l1 = 1.0 - l1;
            l2 = 1.0 - l2;
          }
          const BasisEval e = eval_basis(*s, t, {1.0 - l1 - l2, l1, l2});
          double sum = 0.0;
          Vec2 gsum{0.0, 0.0};
          for (std::size_t i = 0; i < e.values.size(); ++i) {
            sum += e.values[i];
            gsum[0] += e.gradients[i][0];
            gsum[1] += e.gradients[i][1];
          }
          CHECK(std::abs(sum - 1.0) < 1e-14);
          CHECK(std::abs(gsum[0]) < 1e-11);
          CHECK(std::abs(gsum[1]) < 1e-11);
        }
      }
    }
  }

  TEST_CASE("P1 gradients on the reference-shaped triangle") {
    // Lower triangle of n = 1 is (0,0), (1,0), (1,1); build the reference
    // shape (0,0), (1,0), (0,1) directly instead.
    auto mesh = std::make_shared<TriMesh>();
    mesh->subdivision = 1;
    mesh->vertices = {{0, 0}, {1, 0}, {0, 1}};
    mesh->boundary_vertex = {true, true, true};
    mesh->triangles = {{0, 1, 2}};
    auto s = build_space(mesh, 1);
    const BasisEval e = eval_basis(*s, 0, {0.2, 0.3, 0.5});
    CHECK(e.gradients[0][0] == doctest::Approx(-1.0));
    CHECK(e.gradients[0][1] == doctest::Approx(-1.0));
    CHECK(e.gradients[1][0] == doctest::Approx(1.0));
    CHECK(e.gradients[1][1] == doctest::Approx(0.0));
    CHECK(e.gradients[2][0] == doctest::Approx(0.0));
    CHECK(e.gradients[2][1] == doctest::Approx(1.0));
    const BasisEval v = eval_basis(*s, 0, {1.0, 0.0, 0.0});
    CHECK(v.values == std::vector<double>{1.0, 0.0, 0.0});
  }

  TEST_CASE("eval_basis argument checks") {
    auto s = build_space(uniform_triangulation(2), 2);
    CHECK_THROWS_AS(eval_basis(*s, 8, {1.0, 0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(eval_basis(*s, -1, {1.0, 0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(eval_basis(*s, 0, {0.7, 0.7, -0.4}), InvalidArgument);
    CHECK_THROWS_AS(eval_basis(*s, 0, {0.5, 0.5, 0.5}), InvalidArgument);
  }

  TEST_CASE("interpolation") {
    auto s = build_space(uniform_triangulation(4), 2);
    const StateVector zero = interpolate(s, [](Point2) { return 0.0; });
    CHECK(std::all_of(zero.coefficients.begin(), zero.coefficients.end(), [](double c) { return c == 0.0; }));

    auto p1 = build_space(uniform_triangulation(5), 1);
    const StateVector xs = interpolate(p1, [](Point2 p) { return p.x; });
    for (int i = 0; i < p1->num_dofs(); ++i) CHECK(xs.coefficients[i] == p1->dof_points()[i].x);
  }

  TEST_CASE("P1 interpolant of the manufactured solution at (0.3, 0.4) on n = 8") {
    auto s = build_space(uniform_triangulation(8), 1);
    const StateVector I = interpolate(s, McfExact::value);
    // cell (2, 3), local offsets (0.4, 0.2): lower triangle with barycentrics (0.6, 0.2, 0.2)
    const double expected = 0.6 * McfExact::value({2.0 / 8, 3.0 / 8}) + 0.2 * McfExact::value({3.0 / 8, 3.0 / 8}) +
                            0.2 * McfExact::value({3.0 / 8, 4.0 / 8});
    CHECK(std::abs(evaluate_state(I, {0.3, 0.4}).value - expected) < 1e-15);
  }

  TEST_CASE("evaluation: zero state, nodal values, continuity across edges") {
    for (int r = 1; r <= 3; ++r) {
      auto s = build_space(uniform_triangulation(3), r);
      const StateVector zero(s);
      const PointValue z = evaluate_state(zero, {0.37, 0.81});
      CHECK(z.value == 0.0);
      CHECK(z.gradient == Vec2{0.0, 0.0});

      auto g = [](Point2 p) { return std::sin(3 * p.x) * std::cos(2 * p.y) + p.x * p.y; };
      const StateVector I = interpolate(s, g);
      for (int i = 0; i < s->num_dofs(); ++i) {
        CHECK(std::abs(evaluate_state(I, s->dof_points()[i]).value - g(s->dof_points()[i])) < 1e-13);
      }
      // Diagonal of cell (1, 1) is shared by triangles 8 and 9; its midpoint
      // is (1/2, 1/2) in both.
      const double lower = evaluate_on_triangle(I, 8, {0.5, 0.0, 0.5}).value;
      const double upper = evaluate_on_triangle(I, 9, {0.5, 0.5, 0.0}).value;
      CHECK(std::abs(lower - upper) < 1e-12);
      CHECK_THROWS_AS(evaluate_state(I, {-0.1, 0.5}), InvalidArgument);
    }
  }

  TEST_CASE("interpolating a function already in the space reproduces its coefficients") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int r = 1; r <= 3; ++r) {
      auto s = build_space(uniform_triangulation(4), r);
      StateVector f(s);
      for (double& c : f.coefficients) c = val(rng);
      const StateVector g = interpolate(s, [&](Point2 p) { return evaluate_state(f, p).value; });
      CHECK(oracle::max_abs_diff(f.coefficients, g.coefficients) < 1e-12);
    }
  }
}

TEST_SUITE("prolongation") {
  TEST_CASE("same space gives the identity") {
    for (int r = 1; r <= 3; ++r) {
      auto s = build_space(uniform_triangulation(3), r);
      const SparseMatrix P = prolongation(*s, *s);
      const auto D = oracle::to_dense(P);
      for (int i = 0; i < s->num_dofs(); ++i)
        for (int j = 0; j < s->num_dofs(); ++j) CHECK(std::abs(D[i][j] - (i == j ? 1.0 : 0.0)) < 1e-14);
    }
  }

  TEST_CASE("P1 1 -> 2: the centre dof averages the diagonal endpoints") {
    auto c = build_space(uniform_triangulation(1), 1);
    auto f = build_space(uniform_refine(uniform_triangulation(1), 1), 1);
    const SparseMatrix P = prolongation(*c, *f);
    CHECK(P.nrows == 9);
    CHECK(P.ncols == 4);
    int centre = -1;
    for (int i = 0; i < f->num_dofs(); ++i)
      if (!f->is_boundary(i)) centre = i;
    // diagonal endpoints are (0,0) = dof 0 and (1,1) = dof 3
    CHECK(P.at(centre, 0) == doctest::Approx(0.5));
    CHECK(P.at(centre, 3) == doctest::Approx(0.5));
    CHECK(P.at(centre, 1) == 0.0);
    CHECK(P.at(centre, 2) == 0.0);
  }

  TEST_CASE("prolonged coarse functions agree pointwise on nested pairs") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int r = 1; r <= 3; ++r) {
      for (auto [nc, nf] : {std::pair{2, 4}, std::pair{3, 9}, std::pair{4, 16}}) {
        auto c = build_space(uniform_triangulation(nc), r);
        auto fm = (nf == 2 * nc || nf == 4 * nc) ? uniform_refine(c->mesh_ptr(), nf == 2 * nc ? 1 : 2)
                                                 : uniform_triangulation(nf);
        auto f = build_space(fm, r);
        const SparseMatrix P = prolongation(*c, *f);
        StateVector cs(c);
        for (double& v : cs.coefficients) v = val(rng);
        const StateVector fs(f, oracle::matvec(oracle::to_dense(P), cs.coefficients));
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
          const Point2 p{u01(rng), u01(rng)};
          worst = std::max(worst, std::abs(evaluate_state(cs, p).value - evaluate_state(fs, p).value));
        }
        CAPTURE(r);
        CAPTURE(nc);
        CHECK(worst < 1e-12);
      }
    }
  }

  TEST_CASE("degree mismatch") {
    auto c = build_space(uniform_triangulation(2), 1);
    auto f = build_space(uniform_triangulation(4), 2);
    CHECK_THROWS_AS(prolongation(*c, *f), InvalidArgument);
  }
}
