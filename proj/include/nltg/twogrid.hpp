#pragma once

#include <vector>

#include "nltg/linsolve.hpp"
#include "nltg/problem.hpp"
#include "nltg/space.hpp"
#include "nltg/sparse.hpp"

namespace nltg {

struct NewtonConfig {
  double rel_residual_tol = 1e-8;
  int max_iters = 30;
  /// Halve the step while the l2 residual norm does not decrease (at most 8 times).
  bool damping = true;
  double linear_tol = kDefaultLinearTol;
};

struct NewtonResult {
  StateVector solution;
  int iterations = 0;
  std::vector<double> residual_history;  // l2 norms, including the initial one
  double worst_linear_residual = 0.0;
};

/// Newton's method for the discrete system R(w) = 0 on one space.
/// Stops when ||R(w)|| <= max(tol ||R(init)||, 1e-14), or at absolute tol when
/// the initial residual is below 1e-14.
NewtonResult newton_solve(const FeSpace& space, const ProblemDef& problem, const StateVector& init,
                          const NewtonConfig& cfg = {});

/// Prolongation with the coarse boundary columns and fine boundary rows
/// removed: maps coarse functions with zero boundary values into the fine
/// space with zero boundary values.
SparseMatrix dirichlet_prolongation(const SparseMatrix& P, const FeSpace& coarse, const FeSpace& fine);

struct CoarseCorrectionResult {
  StateVector correction;  // on the coarse space
  int iterations = 0;
  std::vector<double> residual_history;
  double worst_linear_residual = 0.0;
};

/// Finds e in the coarse space with P^T R_h(u_k + P e) = 0, via Newton on the
/// Galerkin-restricted system (P^T R_h, P^T B_h P), starting from e = 0.
/// Converged when the restricted residual is <= tol max(1, its value at e = 0).
CoarseCorrectionResult coarse_correction(const SpacePtr& fine_space, const SpacePtr& coarse_space,
                                         const ProblemDef& problem, const SparseMatrix& P, const StateVector& u_k,
                                         const NewtonConfig& cfg = {});

struct FineCorrectionResult {
  StateVector next;
  LinearSolveStats linear;
};

/// One linearized fine solve: B_h(w) u = B_h(w) w - R_h(w), i.e. u = w - B_h(w)^{-1} R_h(w).
FineCorrectionResult fine_correction(const SpacePtr& fine_space, const ProblemDef& problem, const StateVector& u_k1,
                                     const NewtonConfig& cfg = {});

struct TwoGridDiagnostics {
  std::vector<double> ellipticity;         // per fine iterate u_h^0 .. u_h^k
  std::vector<double> linear_residuals;    // fine solve of each sweep
  std::vector<double> coarse_residuals;    // final restricted residual of each coarse correction
};

struct TwoGridResult {
  StateVector coarse_solution;                  // u_H
  std::vector<StateVector> iterates;            // u_h^0 .. u_h^k
  std::vector<StateVector> coarse_corrections;  // e_H^0 .. e_H^{k-1}
  /// Entry 0: Newton steps of the initial coarse solve; entry j+1: Newton
  /// steps of coarse correction j.
  std::vector<int> newton_iteration_counts;
  TwoGridDiagnostics diagnostics;

  const StateVector& final_iterate() const { return iterates.back(); }
};

/// The iterative two-grid method with `sweeps` coarse-correct / fine-linearize
/// sweeps. u_h^0 is the prolonged coarse Newton solution; sweep j computes
/// e_H^j from u_h^j and then u_h^{j+1} by one fine linearized solve at
/// u_h^j + P e_H^j. One sweep is the classical (non-iterative) two-grid method.
TwoGridResult iterative_two_grid(const ProblemDef& problem, const SpacePtr& coarse_space, const SpacePtr& fine_space,
                                 int sweeps, const NewtonConfig& cfg = {});

}  // namespace nltg
