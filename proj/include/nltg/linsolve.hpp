#pragma once

#include <span>
#include <vector>

#include "nltg/kernels.hpp"
#include "nltg/sparse.hpp"

namespace nltg {

inline constexpr double kDefaultLinearTol = 1e-12;

struct LinearSolveStats {
  int iterations = 0;
  double relative_residual = 0.0;  // true residual ||b - A x|| / ||b||
  const char* method = "none";
};

/// Solves A x = b to ||b - A x||_2 <= tol ||b||_2.
///
/// ILU(0)-preconditioned BiCGStab with restarts from the current iterate;
/// falls back to ILU(0)-preconditioned GMRES(60) if BiCGStab stalls or
/// breaks down. Throws SolverFailure (carrying the best relative residual)
/// when neither meets the target within `max_iter` iterations each.
std::vector<double> solve_linear(const SparseMatrix& A, std::span<const double> b, double tol = kDefaultLinearTol,
                                 int max_iter = 10000, LinearSolveStats* stats = nullptr);

std::vector<double> gemv(const SparseMatrix& A, std::span<const double> x, Exec exec = Exec::parallel);

/// C = A B (row-by-row with a dense accumulator; columns come out sorted).
SparseMatrix spgemm(const SparseMatrix& A, const SparseMatrix& B);

/// Galerkin restriction P^T A P.
SparseMatrix triple_product(const SparseMatrix& P, const SparseMatrix& A);

/// Incomplete LU factorization with the sparsity pattern of A.
class Ilu0 {
 public:
  explicit Ilu0(const SparseMatrix& A);
  /// z = (LU)^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;

 private:
  SparseMatrix lu_;
  std::vector<int> diag_;
};

}  // namespace nltg
