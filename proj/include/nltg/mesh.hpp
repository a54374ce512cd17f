#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

namespace nltg {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

using Triangle = std::array<int, 3>;

/// Structured triangulation of the unit square.
///
/// The n x n grid of cells is split along the diagonal from (i/n, j/n) to
/// ((i+1)/n, (j+1)/n). Vertex (i, j) has index j*(n+1) + i; cell (i, j) owns
/// triangles 2*(j*n + i) (lower, below the diagonal) and 2*(j*n + i) + 1 (upper).
/// All triangles are counter-clockwise.
struct TriMesh {
  std::vector<Point2> vertices;
  std::vector<Triangle> triangles;
  std::vector<bool> boundary_vertex;
  int subdivision = 0;

  /// Mesh this one was refined from, if any, and for every triangle here the
  /// index of the parent triangle containing it.
  std::shared_ptr<const TriMesh> parent;
  std::vector<int> parent_triangle;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  double mesh_size() const { return 1.0 / subdivision; }

  /// Signed area of triangle t; positive for every triangle of a valid mesh.
  double signed_area(std::size_t t) const;

  /// Index of a triangle containing p (closed unit square), using the grid map.
  int locate(Point2 p) const;
};

std::shared_ptr<const TriMesh> uniform_triangulation(int n);

/// Refines `levels` times by edge-midpoint subdivision. Each level records
/// its parent mesh, so the result carries a parent chain of length `levels`.
std::shared_ptr<const TriMesh> uniform_refine(std::shared_ptr<const TriMesh> mesh, int levels);

/// Plain-text dump: "nv nt", nv lines "x y b", nt lines "v0 v1 v2".
void write_mesh(std::ostream& out, const TriMesh& mesh);

}  // namespace nltg
