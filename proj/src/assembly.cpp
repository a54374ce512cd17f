#include "nltg/assembly.hpp"

#include <algorithm>
#include <array>

#include "nltg/errors.hpp"

namespace nltg {

namespace {

constexpr int kMaxLocal = 10;

/// Reference basis data at the quadrature points of one rule.
struct ReferenceTable {
  QuadRule rule;
  int n_loc = 0;
  std::vector<std::array<double, kMaxLocal>> values;
  std::vector<std::array<std::array<double, 3>, kMaxLocal>> d_lambda;

  explicit ReferenceTable(const FeSpace& space)
      : rule(quad_rule(assembly_quadrature_degree(space.degree()))), n_loc(space.dofs_per_element()) {
    values.resize(rule.size());
    d_lambda.resize(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.basis().evaluate(rule.points[q], values[q].data(), d_lambda[q].data());
    }
  }
};

struct QuadPointData {
  Point2 x;
  double weight;  // rule weight times area
  double w;
  Vec2 grad_w;
  std::array<Vec2, kMaxLocal> grad_phi;
};

void evaluate_point(const ReferenceTable& ref, const ElementGeometry& geo,
                    std::span<const int> dofs, const std::vector<double>& coeffs, std::size_t q,
                    QuadPointData& out) {
  out.x = geo.map(ref.rule.points[q]);
  out.weight = ref.rule.weights[q] * geo.area;
  out.w = 0.0;
  out.grad_w = {0.0, 0.0};
  for (int i = 0; i < ref.n_loc; ++i) {
    const auto& d = ref.d_lambda[q][i];
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      g[0] += d[k] * geo.grad_lambda[k][0];
      g[1] += d[k] * geo.grad_lambda[k][1];
    }
    out.grad_phi[i] = g;
    const double c = coeffs[dofs[i]];
    out.w += c * ref.values[q][i];
    out.grad_w[0] += c * g[0];
    out.grad_w[1] += c * g[1];
  }
}

void element_residual(const FeSpace& space, const ProblemDef& problem, const ReferenceTable& ref,
                      const std::vector<double>& coeffs, int t, double* local) {
  const ElementGeometry geo = space.geometry(t);
  const auto dofs = space.element_dofs(t);
  for (int i = 0; i < ref.n_loc; ++i) local[i] = 0.0;
  QuadPointData p;
  for (std::size_t q = 0; q < ref.rule.size(); ++q) {
    evaluate_point(ref, geo, dofs, coeffs, q, p);
    const Vec2 a = problem.a(p.x, p.w, p.grad_w);
    const double f = problem.f(p.x, p.w, p.grad_w);
    for (int i = 0; i < ref.n_loc; ++i) {
      local[i] += p.weight * (a[0] * p.grad_phi[i][0] + a[1] * p.grad_phi[i][1] + f * ref.values[q][i]);
    }
  }
}

void element_linearized(const FeSpace& space, const ProblemDef& problem, const ReferenceTable& ref,
                        const std::vector<double>& coeffs, int t, double* local) {
  const int n = ref.n_loc;
  const ElementGeometry geo = space.geometry(t);
  const auto dofs = space.element_dofs(t);
  for (int k = 0; k < n * n; ++k) local[k] = 0.0;
  QuadPointData p;
  for (std::size_t q = 0; q < ref.rule.size(); ++q) {
    evaluate_point(ref, geo, dofs, coeffs, q, p);
    const Vec2 ay = problem.a_y(p.x, p.w, p.grad_w);
    const Mat2 az = problem.a_z(p.x, p.w, p.grad_w);
    const double fy = problem.f_y(p.x, p.w, p.grad_w);
    const Vec2 fz = problem.f_z(p.x, p.w, p.grad_w);
    const auto& phi = ref.values[q];
    for (int j = 0; j < n; ++j) {
      const Vec2& gj = p.grad_phi[j];
      // Flux perturbation a_y phi_j + a_z grad phi_j and source perturbation.
      const Vec2 flux{ay[0] * phi[j] + az[0][0] * gj[0] + az[0][1] * gj[1],
                      ay[1] * phi[j] + az[1][0] * gj[0] + az[1][1] * gj[1]};
      const double src = fy * phi[j] + fz[0] * gj[0] + fz[1] * gj[1];
      for (int i = 0; i < n; ++i) {
        const Vec2& gi = p.grad_phi[i];
        local[i * n + j] += p.weight * (flux[0] * gi[0] + flux[1] * gi[1] + src * phi[i]);
      }
    }
  }
}

void check_state(const FeSpace& space, const StateVector& w) {
  if (!w.space || w.size() != static_cast<std::size_t>(space.num_dofs())) {
    throw InvalidArgument("assembly: state does not live on the given space");
  }
}

}  // namespace

std::vector<double> assemble_residual(const FeSpace& space, const ProblemDef& problem, const StateVector& w,
                                      Exec exec) {
  check_state(space, w);
  const ReferenceTable ref(space);
  const int ne = space.num_elements();
  const int n_loc = ref.n_loc;
  const int n_dofs = space.num_dofs();
  std::vector<double> out(n_dofs, 0.0);

  if (exec == Exec::serial) {
    std::array<double, kMaxLocal> local{};
    for (int t = 0; t < ne; ++t) {
      element_residual(space, problem, ref, w.coefficients, t, local.data());
      const auto dofs = space.element_dofs(t);
      for (int i = 0; i < n_loc; ++i) out[dofs[i]] += local[i];
    }
  } else {
    std::vector<double> buffer(static_cast<std::size_t>(ne) * n_loc);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < ne; ++t) {
      element_residual(space, problem, ref, w.coefficients, t, buffer.data() + static_cast<std::size_t>(t) * n_loc);
    }
    const DofGraph& g = space.graph();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_dofs; ++i) {
      double s = 0.0;
      for (int k = g.vector_gather_offsets[i]; k < g.vector_gather_offsets[i + 1]; ++k) {
        s += buffer[g.vector_gather_slots[k]];
      }
      out[i] = s;
    }
  }
  for (int i = 0; i < n_dofs; ++i) {
    if (space.is_boundary(i)) out[i] = 0.0;
  }
  return out;
}

SparseMatrix assemble_linearized(const FeSpace& space, const ProblemDef& problem, const StateVector& w,
                                 Exec exec) {
  check_state(space, w);
  const ReferenceTable ref(space);
  const DofGraph& g = space.graph();
  const int ne = space.num_elements();
  const int n_loc = ref.n_loc;
  const int n_dofs = space.num_dofs();
  const std::size_t block = static_cast<std::size_t>(n_loc) * n_loc;

  SparseMatrix B;
  B.nrows = n_dofs;
  B.ncols = n_dofs;
  B.row_offsets = g.row_offsets;
  B.col_indices = g.col_indices;
  B.values.assign(g.col_indices.size(), 0.0);

  if (exec == Exec::serial) {
    std::array<double, kMaxLocal * kMaxLocal> local{};
    for (int t = 0; t < ne; ++t) {
      element_linearized(space, problem, ref, w.coefficients, t, local.data());
      const auto dofs = space.element_dofs(t);
      for (int i = 0; i < n_loc; ++i) {
        const int row = dofs[i];
        const auto first = B.col_indices.begin() + B.row_offsets[row];
        const auto last = B.col_indices.begin() + B.row_offsets[row + 1];
        for (int j = 0; j < n_loc; ++j) {
          const auto pos = std::lower_bound(first, last, dofs[j]) - B.col_indices.begin();
          B.values[pos] += local[i * n_loc + j];
        }
      }
    }
  } else {
    std::vector<double> buffer(static_cast<std::size_t>(ne) * block);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < ne; ++t) {
      element_linearized(space, problem, ref, w.coefficients, t, buffer.data() + static_cast<std::size_t>(t) * block);
    }
    const auto nnz = static_cast<std::ptrdiff_t>(B.values.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nnz; ++k) {
      double s = 0.0;
      for (int c = g.matrix_gather_offsets[k]; c < g.matrix_gather_offsets[k + 1]; ++c) {
        s += buffer[g.matrix_gather_slots[c]];
      }
      B.values[k] = s;
    }
  }

  for (int i = 0; i < n_dofs; ++i) {
    const bool row_bd = space.is_boundary(i);
    for (int k = B.row_offsets[i]; k < B.row_offsets[i + 1]; ++k) {
      const int j = B.col_indices[k];
      if (row_bd || space.is_boundary(j)) B.values[k] = (i == j) ? 1.0 : 0.0;
    }
  }
  return B;
}

}  // namespace nltg
