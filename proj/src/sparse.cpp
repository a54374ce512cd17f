#include "nltg/sparse.hpp"

#include <algorithm>

#include "nltg/errors.hpp"

namespace nltg {

double SparseMatrix::at(int i, int j) const {
  if (i < 0 || i >= nrows || j < 0 || j >= ncols) throw InvalidArgument("SparseMatrix::at out of range");
  const auto first = col_indices.begin() + row_offsets[i];
  const auto last = col_indices.begin() + row_offsets[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values[static_cast<std::size_t>(it - col_indices.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t;
  t.nrows = ncols;
  t.ncols = nrows;
  t.row_offsets.assign(ncols + 1, 0);
  for (int c : col_indices) ++t.row_offsets[c + 1];
  for (int r = 0; r < ncols; ++r) t.row_offsets[r + 1] += t.row_offsets[r];
  t.col_indices.resize(nnz());
  t.values.resize(nnz());
  std::vector<int> next(t.row_offsets.begin(), t.row_offsets.end() - 1);
  // Rows are visited in order, so each transposed row comes out sorted.
  for (int r = 0; r < nrows; ++r) {
    for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      const int dst = next[col_indices[k]]++;
      t.col_indices[dst] = r;
      t.values[dst] = values[k];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m;
  m.nrows = n;
  m.ncols = n;
  m.row_offsets.resize(n + 1);
  m.col_indices.resize(n);
  m.values.assign(n, 1.0);
  for (int i = 0; i <= n; ++i) m.row_offsets[i] = i;
  for (int i = 0; i < n; ++i) m.col_indices[i] = i;
  return m;
}

SparseMatrix SparseMatrix::from_triplets(int nrows, int ncols, std::vector<Triplet> triplets) {
  if (nrows < 0 || ncols < 0) throw InvalidArgument("from_triplets: negative dimension");
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw InvalidArgument("from_triplets: index out of range");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.nrows = nrows;
  m.ncols = ncols;
  m.row_offsets.assign(nrows + 1, 0);
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (!m.col_indices.empty() && k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
      m.values.back() += t.value;
      continue;
    }
    m.col_indices.push_back(t.col);
    m.values.push_back(t.value);
    ++m.row_offsets[t.row + 1];
  }
  for (int r = 0; r < nrows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
  return m;
}

}  // namespace nltg
