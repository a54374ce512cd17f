#include "nltg/space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "nltg/errors.hpp"

namespace nltg {

Barycentric ElementGeometry::barycentric(Point2 p) const {
  const Point2 a = corners[0];
  const double dx = p.x - a.x;
  const double dy = p.y - a.y;
  const double l1 = grad_lambda[1][0] * dx + grad_lambda[1][1] * dy;
  const double l2 = grad_lambda[2][0] * dx + grad_lambda[2][1] * dy;
  return {1.0 - l1 - l2, l1, l2};
}

namespace {

bool on_boundary(Point2 p) {
  constexpr double tol = 1e-12;
  return std::abs(p.x) < tol || std::abs(p.y) < tol || std::abs(p.x - 1.0) < tol ||
         std::abs(p.y - 1.0) < tol;
}

DofGraph build_graph(int n_dofs, int n_elem, int n_loc, const std::vector<int>& element_dofs) {
  DofGraph g;
  std::vector<std::vector<int>> rows(n_dofs);
  for (int e = 0; e < n_elem; ++e) {
    const int* dofs = element_dofs.data() + static_cast<std::size_t>(e) * n_loc;
    for (int i = 0; i < n_loc; ++i) {
      for (int j = 0; j < n_loc; ++j) rows[dofs[i]].push_back(dofs[j]);
    }
  }
  g.row_offsets.assign(n_dofs + 1, 0);
  for (int r = 0; r < n_dofs; ++r) {
    auto& row = rows[r];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    g.row_offsets[r + 1] = g.row_offsets[r] + static_cast<int>(row.size());
  }
  g.col_indices.reserve(g.row_offsets.back());
  for (auto& row : rows) {
    g.col_indices.insert(g.col_indices.end(), row.begin(), row.end());
    std::vector<int>().swap(row);
  }

  auto position = [&](int r, int c) {
    const auto first = g.col_indices.begin() + g.row_offsets[r];
    const auto last = g.col_indices.begin() + g.row_offsets[r + 1];
    return static_cast<int>(std::lower_bound(first, last, c) - g.col_indices.begin());
  };

  const std::size_t nnz = g.col_indices.size();
  std::vector<int> slot_pos(static_cast<std::size_t>(n_elem) * n_loc * n_loc);
  g.matrix_gather_offsets.assign(nnz + 1, 0);
  g.vector_gather_offsets.assign(n_dofs + 1, 0);
  for (int e = 0; e < n_elem; ++e) {
    const int* dofs = element_dofs.data() + static_cast<std::size_t>(e) * n_loc;
    for (int i = 0; i < n_loc; ++i) {
      ++g.vector_gather_offsets[dofs[i] + 1];
      for (int j = 0; j < n_loc; ++j) {
        const int pos = position(dofs[i], dofs[j]);
        slot_pos[(static_cast<std::size_t>(e) * n_loc + i) * n_loc + j] = pos;
        ++g.matrix_gather_offsets[pos + 1];
      }
    }
  }
  for (std::size_t k = 0; k < nnz; ++k) g.matrix_gather_offsets[k + 1] += g.matrix_gather_offsets[k];
  for (int r = 0; r < n_dofs; ++r) g.vector_gather_offsets[r + 1] += g.vector_gather_offsets[r];

  g.matrix_gather_slots.resize(slot_pos.size());
  g.vector_gather_slots.resize(static_cast<std::size_t>(n_elem) * n_loc);
  std::vector<int> mnext(g.matrix_gather_offsets.begin(), g.matrix_gather_offsets.end() - 1);
  std::vector<int> vnext(g.vector_gather_offsets.begin(), g.vector_gather_offsets.end() - 1);
  for (int e = 0; e < n_elem; ++e) {
    const int* dofs = element_dofs.data() + static_cast<std::size_t>(e) * n_loc;
    for (int i = 0; i < n_loc; ++i) {
      const int vslot = e * n_loc + i;
      g.vector_gather_slots[vnext[dofs[i]]++] = vslot;
      for (int j = 0; j < n_loc; ++j) {
        const int slot = vslot * n_loc + j;
        g.matrix_gather_slots[mnext[slot_pos[slot]]++] = slot;
      }
    }
  }
  return g;
}

}  // namespace

FeSpace::FeSpace(std::shared_ptr<const TriMesh> mesh, int degree) : mesh_(std::move(mesh)), basis_(degree) {
  if (!mesh_) throw InvalidArgument("FeSpace: null mesh");
  const int r = degree;
  const int nv = static_cast<int>(mesh_->num_vertices());
  const int nt = static_cast<int>(mesh_->num_triangles());
  const int n_loc = basis_.size();

  dof_points_ = mesh_->vertices;

  // Edge numbering by first appearance.
  std::unordered_map<long long, int> edge_index;
  std::vector<std::array<int, 2>> edges;  // (low, high) global vertex
  std::vector<std::array<int, 3>> tri_edges(nt);
  edge_index.reserve(static_cast<std::size_t>(nt) * 2);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh_->triangles[t];
    for (int le = 0; le < 3; ++le) {
      const int va = tri[kLocalEdges[le][0]];
      const int vb = tri[kLocalEdges[le][1]];
      const int lo = std::min(va, vb);
      const int hi = std::max(va, vb);
      const long long key = static_cast<long long>(lo) * (nv + 1) + hi;
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(edges.size()));
      if (inserted) edges.push_back({lo, hi});
      tri_edges[t][le] = it->second;
    }
  }
  const int ne = static_cast<int>(edges.size());
  const int per_edge = r - 1;

  for (const auto& [lo, hi] : edges) {
    const Point2 a = mesh_->vertices[lo];
    const Point2 b = mesh_->vertices[hi];
    for (int s = 1; s <= per_edge; ++s) {
      const double w = static_cast<double>(s) / r;
      dof_points_.push_back({(1.0 - w) * a.x + w * b.x, (1.0 - w) * a.y + w * b.y});
    }
  }
  const int interior_base = nv + ne * per_edge;
  if (r == 3) {
    for (int t = 0; t < nt; ++t) {
      const auto& tri = mesh_->triangles[t];
      Point2 c{0.0, 0.0};
      for (int k = 0; k < 3; ++k) {
        c.x += mesh_->vertices[tri[k]].x / 3.0;
        c.y += mesh_->vertices[tri[k]].y / 3.0;
      }
      dof_points_.push_back(c);
    }
  }

  element_dofs_.resize(static_cast<std::size_t>(nt) * n_loc);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh_->triangles[t];
    int* dofs = element_dofs_.data() + static_cast<std::size_t>(t) * n_loc;
    dofs[0] = tri[0];
    dofs[1] = tri[1];
    dofs[2] = tri[2];
    int k = 3;
    for (int le = 0; le < 3; ++le) {
      const int va = tri[kLocalEdges[le][0]];
      const int e = tri_edges[t][le];
      const bool forward = edges[e][0] == va;
      for (int s = 1; s <= per_edge; ++s) {
        const int global_s = forward ? s : r - s;
        dofs[k++] = nv + e * per_edge + (global_s - 1);
      }
    }
    if (r == 3) dofs[k++] = interior_base + t;
  }

  boundary_.resize(dof_points_.size());
  for (std::size_t i = 0; i < dof_points_.size(); ++i) boundary_[i] = on_boundary(dof_points_[i]);

  graph_ = build_graph(num_dofs(), nt, n_loc, element_dofs_);
}

ElementGeometry FeSpace::geometry(int t) const {
  const auto& tri = mesh_->triangles[t];
  ElementGeometry g;
  for (int k = 0; k < 3; ++k) g.corners[k] = mesh_->vertices[tri[k]];
  const auto& [p0, p1, p2] = g.corners;
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  g.area = 0.5 * det;
  g.grad_lambda[0] = {(p1.y - p2.y) / det, (p2.x - p1.x) / det};
  g.grad_lambda[1] = {(p2.y - p0.y) / det, (p0.x - p2.x) / det};
  g.grad_lambda[2] = {(p0.y - p1.y) / det, (p1.x - p0.x) / det};
  return g;
}

SpacePtr build_space(std::shared_ptr<const TriMesh> mesh, int degree) {
  if (degree < 1 || degree > 3) throw InvalidArgument("build_space: degree must be 1, 2 or 3");
  return std::make_shared<const FeSpace>(std::move(mesh), degree);
}

StateVector::StateVector(SpacePtr s, std::vector<double> c) : space(std::move(s)), coefficients(std::move(c)) {
  if (!space || coefficients.size() != static_cast<std::size_t>(space->num_dofs())) {
    throw InvalidArgument("StateVector: coefficient count does not match the space");
  }
}

BasisEval eval_basis(const FeSpace& space, int t, const Barycentric& b) {
  if (t < 0 || t >= space.num_elements()) throw InvalidArgument("eval_basis: triangle index out of range");
  constexpr double tol = 1e-12;
  if (b[0] < -tol || b[1] < -tol || b[2] < -tol || std::abs(b[0] + b[1] + b[2] - 1.0) > tol) {
    throw InvalidArgument("eval_basis: not a barycentric point of the triangle");
  }
  const int n = space.dofs_per_element();
  const ElementGeometry geo = space.geometry(t);
  BasisEval out;
  out.values.resize(n);
  out.gradients.resize(n);
  std::vector<std::array<double, 3>> d(n);
  space.basis().evaluate(b, out.values.data(), d.data());
  for (int i = 0; i < n; ++i) {
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      g[0] += d[i][k] * geo.grad_lambda[k][0];
      g[1] += d[i][k] * geo.grad_lambda[k][1];
    }
    out.gradients[i] = g;
  }
  return out;
}

StateVector interpolate(SpacePtr space, const ScalarField& g) {
  StateVector s(space);
  const auto& pts = space->dof_points();
  for (std::size_t i = 0; i < pts.size(); ++i) s.coefficients[i] = g(pts[i]);
  return s;
}

StateVector zero_boundary(StateVector s) {
  const auto& mask = s.space->boundary_dof_mask();
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
    if (mask[i]) s.coefficients[i] = 0.0;
  }
  return s;
}

PointValue evaluate_on_triangle(const StateVector& state, int t, const Barycentric& b) {
  const FeSpace& space = *state.space;
  const int n = space.dofs_per_element();
  const ElementGeometry geo = space.geometry(t);
  std::array<double, 10> v{};
  std::array<std::array<double, 3>, 10> d{};
  space.basis().evaluate(b, v.data(), d.data());
  const auto dofs = space.element_dofs(t);
  PointValue out;
  std::array<double, 3> dl{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    const double c = state.coefficients[dofs[i]];
    out.value += c * v[i];
    for (int k = 0; k < 3; ++k) dl[k] += c * d[i][k];
  }
  for (int k = 0; k < 3; ++k) {
    out.gradient[0] += dl[k] * geo.grad_lambda[k][0];
    out.gradient[1] += dl[k] * geo.grad_lambda[k][1];
  }
  return out;
}

PointValue evaluate_state(const StateVector& state, Point2 x) {
  if (!state.space || state.size() != static_cast<std::size_t>(state.space->num_dofs())) {
    throw InvalidArgument("evaluate_state: state does not match its space");
  }
  const int t = state.space->mesh().locate(x);
  return evaluate_on_triangle(state, t, state.space->geometry(t).barycentric(x));
}

SparseMatrix prolongation(const FeSpace& coarse, const FeSpace& fine) {
  if (coarse.degree() != fine.degree()) throw InvalidArgument("prolongation: degree mismatch");
  const int n_loc = coarse.dofs_per_element();
  std::array<double, 10> v{};
  std::array<std::array<double, 3>, 10> d{};
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(fine.num_dofs()) * 4);
  const auto& pts = fine.dof_points();
  for (int i = 0; i < fine.num_dofs(); ++i) {
    const int t = coarse.mesh().locate(pts[i]);
    const Barycentric b = coarse.geometry(t).barycentric(pts[i]);
    coarse.basis().evaluate(b, v.data(), d.data());
    const auto dofs = coarse.element_dofs(t);
    for (int k = 0; k < n_loc; ++k) {
      if (std::abs(v[k]) > 1e-14) triplets.push_back({i, dofs[k], v[k]});
    }
  }
  return SparseMatrix::from_triplets(fine.num_dofs(), coarse.num_dofs(), std::move(triplets));
}

}  // namespace nltg
