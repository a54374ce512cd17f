#include "nltg/twogrid.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "nltg/assembly.hpp"
#include "nltg/errors.hpp"
#include "nltg/kernels.hpp"

namespace nltg {

namespace {

constexpr double kResidualFloor = 1e-14;

void check_config(const NewtonConfig& cfg) {
  if (!(cfg.rel_residual_tol > 0.0)) throw InvalidArgument("Newton tolerance must be positive");
  if (cfg.max_iters < 1) throw InvalidArgument("Newton max_iters must be >= 1");
}

/// Adds a unit diagonal on the masked rows (which are empty in `A`).
SparseMatrix with_unit_rows(const SparseMatrix& A, const std::vector<bool>& mask) {
  std::vector<Triplet> trip;
  trip.reserve(A.nnz() + mask.size());
  for (int i = 0; i < A.nrows; ++i) {
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) trip.push_back({i, A.col_indices[k], A.values[k]});
    if (mask[i]) trip.push_back({i, i, 1.0});
  }
  return SparseMatrix::from_triplets(A.nrows, A.ncols, std::move(trip));
}

/// Step update with optional residual-decrease halving. Returns the accepted
/// state and its residual.
template <typename ResidualFn>
std::pair<std::vector<double>, std::vector<double>> damped_update(const std::vector<double>& x,
                                                                  const std::vector<double>& dx, double current_norm,
                                                                  bool damping, ResidualFn&& residual) {
  double step = 1.0;
  std::vector<double> trial(x.size());
  std::vector<double> r;
  for (int halving = 0;; ++halving) {
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + step * dx[i];
    r = residual(trial);
    if (!damping || halving == 8 || kernels::norm2(r) < current_norm) break;
    step *= 0.5;
  }
  return {std::move(trial), std::move(r)};
}

}  // namespace

NewtonResult newton_solve(const FeSpace& space, const ProblemDef& problem, const StateVector& init,
                          const NewtonConfig& cfg) {
  check_config(cfg);
  if (!init.space || init.size() != static_cast<std::size_t>(space.num_dofs())) {
    throw InvalidArgument("newton_solve: initial state does not match the space");
  }
  NewtonResult out;
  out.solution = zero_boundary(init);
  std::vector<double> R = assemble_residual(space, problem, out.solution);
  double rnorm = kernels::norm2(R);
  out.residual_history.push_back(rnorm);
  // Relative target, floored at round-off so a restart from a converged
  // state does not chase an unreachable residual.
  const double target =
      rnorm < kResidualFloor ? cfg.rel_residual_tol : std::max(cfg.rel_residual_tol * rnorm, kResidualFloor);

  auto residual = [&](const std::vector<double>& c) {
    return assemble_residual(space, problem, StateVector(init.space, c));
  };

  while (rnorm > target) {
    if (out.iterations == cfg.max_iters) {
      throw NonlinearFailure(fmt::format("Newton did not converge in {} iterations (residual {:.3e}, target {:.3e})",
                                         cfg.max_iters, rnorm, target),
                             out.residual_history);
    }
    const SparseMatrix J = assemble_linearized(space, problem, out.solution);
    for (double& v : R) v = -v;
    LinearSolveStats ls;
    const std::vector<double> dx = solve_linear(J, R, cfg.linear_tol, 10000, &ls);
    out.worst_linear_residual = std::max(out.worst_linear_residual, ls.relative_residual);
    auto [next, Rn] = damped_update(out.solution.coefficients, dx, rnorm, cfg.damping, residual);
    out.solution.coefficients = std::move(next);
    out.solution = zero_boundary(std::move(out.solution));
    R = std::move(Rn);
    rnorm = kernels::norm2(R);
    out.residual_history.push_back(rnorm);
    ++out.iterations;
  }
  return out;
}

SparseMatrix dirichlet_prolongation(const SparseMatrix& P, const FeSpace& coarse, const FeSpace& fine) {
  if (P.nrows != fine.num_dofs() || P.ncols != coarse.num_dofs()) {
    throw InvalidArgument("dirichlet_prolongation: P does not map coarse to fine");
  }
  SparseMatrix P0;
  P0.nrows = P.nrows;
  P0.ncols = P.ncols;
  P0.row_offsets.assign(P.nrows + 1, 0);
  for (int i = 0; i < P.nrows; ++i) {
    if (!fine.is_boundary(i)) {
      for (int k = P.row_offsets[i]; k < P.row_offsets[i + 1]; ++k) {
        const int j = P.col_indices[k];
        if (coarse.is_boundary(j)) continue;
        P0.col_indices.push_back(j);
        P0.values.push_back(P.values[k]);
      }
    }
    P0.row_offsets[i + 1] = static_cast<int>(P0.col_indices.size());
  }
  return P0;
}

CoarseCorrectionResult coarse_correction(const SpacePtr& fine_space, const SpacePtr& coarse_space,
                                         const ProblemDef& problem, const SparseMatrix& P, const StateVector& u_k,
                                         const NewtonConfig& cfg) {
  check_config(cfg);
  if (u_k.size() != static_cast<std::size_t>(fine_space->num_dofs())) {
    throw InvalidArgument("coarse_correction: u_k does not live on the fine space");
  }
  const FeSpace& fine = *fine_space;
  const FeSpace& coarse = *coarse_space;
  const SparseMatrix P0 = dirichlet_prolongation(P, coarse, fine);
  const SparseMatrix P0t = P0.transpose();

  auto fine_state = [&](const std::vector<double>& e) {
    std::vector<double> w = gemv(P0, e);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += u_k.coefficients[i];
    return StateVector(fine_space, std::move(w));
  };
  auto restricted_residual = [&](const std::vector<double>& e) {
    return gemv(P0t, assemble_residual(fine, problem, fine_state(e)));
  };

  CoarseCorrectionResult out;
  std::vector<double> e(coarse.num_dofs(), 0.0);
  std::vector<double> rc = restricted_residual(e);
  double rnorm = kernels::norm2(rc);
  out.residual_history.push_back(rnorm);
  const double target = cfg.rel_residual_tol * std::max(1.0, rnorm);

  while (rnorm > target) {
    if (out.iterations == cfg.max_iters) {
      throw NonlinearFailure(fmt::format("coarse correction did not converge in {} iterations (residual {:.3e})",
                                         cfg.max_iters, rnorm),
                             out.residual_history);
    }
    const SparseMatrix B = assemble_linearized(fine, problem, fine_state(e));
    const SparseMatrix J = with_unit_rows(triple_product(P0, B), coarse.boundary_dof_mask());
    for (double& v : rc) v = -v;
    LinearSolveStats ls;
    const std::vector<double> de = solve_linear(J, rc, cfg.linear_tol, 10000, &ls);
    out.worst_linear_residual = std::max(out.worst_linear_residual, ls.relative_residual);
    auto [next, rn] = damped_update(e, de, rnorm, cfg.damping, restricted_residual);
    e = std::move(next);
    rc = std::move(rn);
    rnorm = kernels::norm2(rc);
    out.residual_history.push_back(rnorm);
    ++out.iterations;
  }
  out.correction = zero_boundary(StateVector(coarse_space, std::move(e)));
  return out;
}

FineCorrectionResult fine_correction(const SpacePtr& fine_space, const ProblemDef& problem, const StateVector& u_k1,
                                     const NewtonConfig& cfg) {
  if (u_k1.size() != static_cast<std::size_t>(fine_space->num_dofs())) {
    throw InvalidArgument("fine_correction: state does not live on the fine space");
  }
  const FeSpace& fine = *fine_space;
  const StateVector w = zero_boundary(u_k1);
  std::vector<double> R = assemble_residual(fine, problem, w);
  FineCorrectionResult out;
  out.next = w;
  if (kernels::norm2(R) == 0.0) return out;
  const SparseMatrix B = assemble_linearized(fine, problem, w);
  const std::vector<double> delta = solve_linear(B, R, cfg.linear_tol, 10000, &out.linear);
  for (std::size_t i = 0; i < delta.size(); ++i) out.next.coefficients[i] -= delta[i];
  out.next = zero_boundary(std::move(out.next));
  return out;
}

TwoGridResult iterative_two_grid(const ProblemDef& problem, const SpacePtr& coarse_space, const SpacePtr& fine_space,
                                 int sweeps, const NewtonConfig& cfg) {
  if (sweeps < 1) throw InvalidArgument("iterative_two_grid: at least one sweep is required");
  if (!coarse_space || !fine_space) throw InvalidArgument("iterative_two_grid: null space");
  if (coarse_space->degree() != fine_space->degree()) {
    throw InvalidArgument("iterative_two_grid: coarse and fine degrees differ");
  }
  check_config(cfg);
  const SparseMatrix P = prolongation(*coarse_space, *fine_space);

  TwoGridResult out;
  NewtonResult coarse = newton_solve(*coarse_space, problem, StateVector(coarse_space), cfg);
  out.newton_iteration_counts.push_back(coarse.iterations);
  out.coarse_solution = std::move(coarse.solution);
  out.iterates.push_back(
      zero_boundary(StateVector(fine_space, gemv(P, out.coarse_solution.coefficients))));
  out.diagnostics.ellipticity.push_back(ellipticity_probe(problem, out.iterates.back(), *fine_space));

  for (int j = 0; j < sweeps; ++j) {
    const StateVector& u = out.iterates.back();
    CoarseCorrectionResult cc = coarse_correction(fine_space, coarse_space, problem, P, u, cfg);
    out.newton_iteration_counts.push_back(cc.iterations);
    out.diagnostics.coarse_residuals.push_back(cc.residual_history.back());

    std::vector<double> u1 = gemv(P, cc.correction.coefficients);
    for (std::size_t i = 0; i < u1.size(); ++i) u1[i] += u.coefficients[i];
    FineCorrectionResult fc = fine_correction(fine_space, problem, StateVector(fine_space, std::move(u1)), cfg);
    out.diagnostics.linear_residuals.push_back(fc.linear.relative_residual);
    out.coarse_corrections.push_back(std::move(cc.correction));
    out.iterates.push_back(std::move(fc.next));
    out.diagnostics.ellipticity.push_back(ellipticity_probe(problem, out.iterates.back(), *fine_space));
  }
  return out;
}

}  // namespace nltg
