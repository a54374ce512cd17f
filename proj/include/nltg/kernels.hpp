#pragma once

#include <span>

#include "nltg/sparse.hpp"

namespace nltg {

/// Execution choice for the data-parallel kernels. Both paths produce
/// bit-identical results; `serial` is the reference used in tests and
/// benchmarks.
enum class Exec { serial, parallel };

namespace kernels {

/// y = A x
void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y, Exec exec = Exec::parallel);

/// Dot product summed over fixed 4096-entry blocks, so the result does not
/// depend on the thread count.
double dot(std::span<const double> a, std::span<const double> b, Exec exec = Exec::parallel);

double norm2(std::span<const double> a, Exec exec = Exec::parallel);

/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y, Exec exec = Exec::parallel);

}  // namespace kernels
}  // namespace nltg
