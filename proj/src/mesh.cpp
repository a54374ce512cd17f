#include "nltg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nltg/errors.hpp"

namespace nltg {

namespace {

std::shared_ptr<TriMesh> structured(int n) {
  auto mesh = std::make_shared<TriMesh>();
  mesh->subdivision = n;
  const int nv1 = n + 1;
  mesh->vertices.reserve(static_cast<std::size_t>(nv1) * nv1);
  mesh->boundary_vertex.reserve(static_cast<std::size_t>(nv1) * nv1);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh->vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      mesh->boundary_vertex.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }
  mesh->triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * nv1 + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + nv1;
      const int v11 = v01 + 1;
      mesh->triangles.push_back({v00, v10, v11});
      mesh->triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

}  // namespace

double TriMesh::signed_area(std::size_t t) const {
  const auto& tri = triangles.at(t);
  const Point2 a = vertices[tri[0]];
  const Point2 b = vertices[tri[1]];
  const Point2 c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

int TriMesh::locate(Point2 p) const {
  constexpr double slack = 1e-14;
  if (!(p.x >= -slack && p.x <= 1.0 + slack && p.y >= -slack && p.y <= 1.0 + slack)) {
    throw InvalidArgument("point outside the closed unit square");
  }
  const int n = subdivision;
  const double sx = p.x * n;
  const double sy = p.y * n;
  const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, n - 1);
  const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, n - 1);
  const bool lower = (sy - j) <= (sx - i);
  return 2 * (j * n + i) + (lower ? 0 : 1);
}

std::shared_ptr<const TriMesh> uniform_triangulation(int n) {
  if (n < 1) throw InvalidArgument("uniform_triangulation: n must be >= 1");
  return structured(n);
}

std::shared_ptr<const TriMesh> uniform_refine(std::shared_ptr<const TriMesh> mesh, int levels) {
  if (!mesh) throw InvalidArgument("uniform_refine: null mesh");
  if (levels < 0) throw InvalidArgument("uniform_refine: levels must be >= 0");
  for (int level = 0; level < levels; ++level) {
    const int nc = mesh->subdivision;
    const int nf = 2 * nc;
    auto fine = structured(nf);
    // Red refinement of the structured grid with the same diagonal direction
    // reproduces the structured grid: the lower coarse triangle of a cell owns
    // both halves of the bottom-right fine cell and the lower halves of the
    // two fine cells on the diagonal.
    fine->parent_triangle.resize(fine->triangles.size());
    for (int J = 0; J < nf; ++J) {
      for (int I = 0; I < nf; ++I) {
        const int coarse_cell = (J / 2) * nc + (I / 2);
        const int li = I % 2;
        const int lj = J % 2;
        for (int half = 0; half < 2; ++half) {
          bool parent_lower;
          if (li == lj) {
            parent_lower = (half == 0);
          } else {
            parent_lower = (li == 1);
          }
          fine->parent_triangle[2 * (J * nf + I) + half] = 2 * coarse_cell + (parent_lower ? 0 : 1);
        }
      }
    }
    fine->parent = std::move(mesh);
    mesh = std::move(fine);
  }
  return mesh;
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    out << mesh.vertices[v].x << ' ' << mesh.vertices[v].y << ' ' << (mesh.boundary_vertex[v] ? 1 : 0)
        << '\n';
  }
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace nltg
