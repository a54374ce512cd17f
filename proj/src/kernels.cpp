#include "nltg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nltg::kernels {

namespace {
constexpr std::ptrdiff_t kBlock = 4096;
}

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y, Exec exec) {
  const int n = A.nrows;
  const int* rp = A.row_offsets.data();
  const int* ci = A.col_indices.data();
  const double* v = A.values.data();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[ci[k]];
      y[i] = s;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[ci[k]];
      y[i] = s;
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  const std::ptrdiff_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
  auto block_sum = [&](std::ptrdiff_t blk) {
    const std::ptrdiff_t lo = blk * kBlock;
    const std::ptrdiff_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[blk] = s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < nblocks; ++blk) block_sum(blk);
  } else {
    for (std::ptrdiff_t blk = 0; blk < nblocks; ++blk) block_sum(blk);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double norm2(std::span<const double> a, Exec exec) { return std::sqrt(dot(a, a, exec)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
  }
}

}  // namespace nltg::kernels
