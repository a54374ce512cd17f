#pragma once

#include <vector>

#include "nltg/kernels.hpp"
#include "nltg/problem.hpp"
#include "nltg/space.hpp"
#include "nltg/sparse.hpp"

namespace nltg {

/// Quadrature degree used for all assembly on a space of degree r.
inline int assembly_quadrature_degree(int r) { return 2 * r + 2; }

/// R_i = integral of a(x, w, grad w) . grad phi_i + f(x, w, grad w) phi_i.
/// Boundary entries are set to zero.
std::vector<double> assemble_residual(const FeSpace& space, const ProblemDef& problem, const StateVector& w,
                                      Exec exec = Exec::parallel);

/// B_ij = B(w; phi_j, phi_i), the linearization of the residual at w.
/// Boundary rows and columns are zeroed and given a unit diagonal; the
/// sparsity pattern is the full element graph of the space.
SparseMatrix assemble_linearized(const FeSpace& space, const ProblemDef& problem, const StateVector& w,
                                 Exec exec = Exec::parallel);

}  // namespace nltg
