#pragma once

#include <cstddef>
#include <vector>

namespace nltg {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-row sparse matrix. Column indices are strictly increasing within
/// each row; explicit zeros may be stored.
struct SparseMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<int> row_offsets{0};
  std::vector<int> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  /// Value at (i, j), zero if not stored.
  double at(int i, int j) const;

  SparseMatrix transpose() const;

  static SparseMatrix identity(int n);

  /// Builds from unordered triplets; duplicates are summed.
  static SparseMatrix from_triplets(int nrows, int ncols, std::vector<Triplet> triplets);
};

}  // namespace nltg
