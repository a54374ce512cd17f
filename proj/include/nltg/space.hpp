#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "nltg/basis.hpp"
#include "nltg/mesh.hpp"
#include "nltg/quadrature.hpp"
#include "nltg/sparse.hpp"

namespace nltg {

using Vec2 = std::array<double, 2>;

/// Element-to-global gather tables. Every stored matrix entry (and every
/// vector entry) lists the element-local slots that contribute to it, in
/// increasing element order, so a parallel gather sums in exactly the order a
/// serial element-by-element scatter would.
struct DofGraph {
  std::vector<int> row_offsets;
  std::vector<int> col_indices;

  std::vector<int> matrix_gather_offsets;  // size nnz + 1
  std::vector<int> matrix_gather_slots;    // element * n_loc^2 + i * n_loc + j
  std::vector<int> vector_gather_offsets;  // size n_dofs + 1
  std::vector<int> vector_gather_slots;    // element * n_loc + i
};

/// Affine geometry of one triangle.
struct ElementGeometry {
  std::array<Point2, 3> corners;
  std::array<Vec2, 3> grad_lambda;
  double area = 0.0;

  Point2 map(const Barycentric& b) const {
    return {b[0] * corners[0].x + b[1] * corners[1].x + b[2] * corners[2].x,
            b[0] * corners[0].y + b[1] * corners[1].y + b[2] * corners[2].y};
  }
  Barycentric barycentric(Point2 p) const;
};

/// Continuous Lagrange space of degree 1-3 on a structured mesh.
///
/// Global DOFs: mesh vertices first (mesh order), then edge nodes grouped by
/// edge index (edges numbered by first appearance in triangle order; the node
/// nearer the lower-numbered vertex first), then cell interiors.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const TriMesh> mesh, int degree);

  const TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return basis_.degree(); }
  const LagrangeBasis& basis() const { return basis_; }

  int num_dofs() const { return static_cast<int>(dof_points_.size()); }
  int dofs_per_element() const { return basis_.size(); }
  int num_elements() const { return static_cast<int>(mesh_->num_triangles()); }

  const std::vector<Point2>& dof_points() const { return dof_points_; }
  std::span<const int> element_dofs(int t) const {
    return {element_dofs_.data() + static_cast<std::size_t>(t) * dofs_per_element(),
            static_cast<std::size_t>(dofs_per_element())};
  }
  const std::vector<bool>& boundary_dof_mask() const { return boundary_; }
  bool is_boundary(int dof) const { return boundary_[dof]; }

  ElementGeometry geometry(int t) const;

  const DofGraph& graph() const { return graph_; }

 private:
  std::shared_ptr<const TriMesh> mesh_;
  LagrangeBasis basis_;
  std::vector<Point2> dof_points_;
  std::vector<int> element_dofs_;
  std::vector<bool> boundary_;
  DofGraph graph_;
};

using SpacePtr = std::shared_ptr<const FeSpace>;

SpacePtr build_space(std::shared_ptr<const TriMesh> mesh, int degree);

/// Coefficient vector of a finite-element function.
struct StateVector {
  SpacePtr space;
  std::vector<double> coefficients;

  StateVector() = default;
  explicit StateVector(SpacePtr s) : space(std::move(s)), coefficients(space->num_dofs(), 0.0) {}
  StateVector(SpacePtr s, std::vector<double> c);

  std::size_t size() const { return coefficients.size(); }
};

struct BasisEval {
  std::vector<double> values;
  std::vector<Vec2> gradients;
};

/// Local basis values and physical gradients on triangle `t` at barycentric point `b`.
BasisEval eval_basis(const FeSpace& space, int t, const Barycentric& b);

using ScalarField = std::function<double(Point2)>;

StateVector interpolate(SpacePtr space, const ScalarField& g);

/// Copy with all boundary coefficients set to zero.
StateVector zero_boundary(StateVector s);

struct PointValue {
  double value = 0.0;
  Vec2 gradient{0.0, 0.0};
};

PointValue evaluate_state(const StateVector& state, Point2 x);

/// Evaluates on a given triangle (no point location). `b` need not be clamped.
PointValue evaluate_on_triangle(const StateVector& state, int t, const Barycentric& b);

/// Fine-by-coarse matrix whose row for a fine DOF holds the coarse basis
/// functions evaluated at that DOF's point. Exact when the fine mesh is nested
/// in the coarse one; plain interpolation at the fine nodes otherwise.
SparseMatrix prolongation(const FeSpace& coarse, const FeSpace& fine);

}  // namespace nltg
