#include "nltg/basis.hpp"

#include "nltg/errors.hpp"

namespace nltg {

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > 3) throw InvalidArgument("Lagrange degree must be 1, 2 or 3");
  nodes_ = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  for (const auto& [a, b] : kLocalEdges) {
    for (int t = 1; t < degree; ++t) {
      Barycentric node{0.0, 0.0, 0.0};
      node[a] = static_cast<double>(degree - t) / degree;
      node[b] = static_cast<double>(t) / degree;
      nodes_.push_back(node);
    }
  }
  if (degree == 3) nodes_.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
}

void LagrangeBasis::evaluate(const Barycentric& l, double* v, std::array<double, 3>* d) const {
  const int n = size();
  for (int i = 0; i < n; ++i) d[i] = {0.0, 0.0, 0.0};

  switch (degree_) {
    case 1:
      for (int i = 0; i < 3; ++i) {
        v[i] = l[i];
        d[i][i] = 1.0;
      }
      break;
    case 2:
      for (int i = 0; i < 3; ++i) {
        v[i] = l[i] * (2.0 * l[i] - 1.0);
        d[i][i] = 4.0 * l[i] - 1.0;
      }
      for (int e = 0; e < 3; ++e) {
        const auto [a, b] = kLocalEdges[e];
        v[3 + e] = 4.0 * l[a] * l[b];
        d[3 + e][a] = 4.0 * l[b];
        d[3 + e][b] = 4.0 * l[a];
      }
      break;
    case 3: {
      for (int i = 0; i < 3; ++i) {
        v[i] = 0.5 * l[i] * (3.0 * l[i] - 1.0) * (3.0 * l[i] - 2.0);
        d[i][i] = 0.5 * (27.0 * l[i] * l[i] - 18.0 * l[i] + 2.0);
      }
      int k = 3;
      for (const auto& [a, b] : kLocalEdges) {
        // Node at (2/3, 1/3) along a -> b, then (1/3, 2/3).
        for (const auto& [p, q] : {std::array<int, 2>{a, b}, std::array<int, 2>{b, a}}) {
          v[k] = 4.5 * l[p] * l[q] * (3.0 * l[p] - 1.0);
          d[k][p] = 4.5 * l[q] * (6.0 * l[p] - 1.0);
          d[k][q] = 4.5 * l[p] * (3.0 * l[p] - 1.0);
          ++k;
        }
      }
      v[9] = 27.0 * l[0] * l[1] * l[2];
      d[9] = {27.0 * l[1] * l[2], 27.0 * l[0] * l[2], 27.0 * l[0] * l[1]};
      break;
    }
    default:
      break;
  }
}

}  // namespace nltg
