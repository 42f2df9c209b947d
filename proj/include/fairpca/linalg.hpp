#pragma once

#include <cstddef>
#include <vector>

#include "fairpca/matrix.hpp"
#include "fairpca/tolerances.hpp"

namespace fairpca {

/// Eigendecomposition of a symmetric matrix. Eigenvalues are sorted
/// descending and column k of eigenvectors pairs with eigenvalues[k].
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;  // d x d, column-major
};

/// A d x d symmetric matrix claimed to be (near) an orthogonal projection of
/// rank at most nominal_rank. retained counts the eigendirections actually
/// kept when the operator was built.
struct ProjectionOperator {
  SymMatrix matrix;
  std::size_t nominal_rank = 0;
  std::size_t retained = 0;
};

/// Full eigendecomposition by cyclic Jacobi with a fixed row-major sweep
/// order, so results are deterministic for a fixed input. Stops when the
/// off-diagonal Frobenius norm drops below eig_offdiag_rel * ||A||_F; throws
/// ConvergenceError after eig_max_sweeps sweeps, ValidationError on
/// asymmetric input. Eigenvector signs are normalized so the entry of largest
/// magnitude in each column is positive.
EigenDecomposition sym_eig(const SymMatrix& a,
                           const Tolerances& tol = default_tolerances());

/// Nearest rank-<=r orthogonal projection in the spectral sense: keeps the
/// r leading eigendirections (fewer when trailing eigenvalues fall below
/// rank_eig_abs). Requires 1 <= r <= d and input PSD up to tolerance; throws
/// ValidationError when lambda_min < -indefinite_rel * ||A||_F. Ties between
/// equal eigenvalues are resolved by the eigensolver's deterministic order;
/// the choice within a tied eigenspace is implementation-defined.
ProjectionOperator project_rank_r(const SymMatrix& a, std::size_t r,
                                  const Tolerances& tol = default_tolerances());

/// Frobenius-nearest point of {0 <= P <= I, Tr P <= r}, computed in the
/// eigenbasis: eigenvalues map to clip(lambda - theta, 0, 1) where theta = 0
/// if plain clipping already meets the trace budget, otherwise the unique
/// theta > 0 (bisection to bisection_abs) making the clipped sum equal r.
SymMatrix project_spectral_box_trace(const SymMatrix& a, std::size_t r,
                                     const Tolerances& tol = default_tolerances());

/// ||U^T U - I_r||_F; zero exactly when the columns are orthonormal.
double orthonormality_defect(const Matrix& u);

/// Modified Gram-Schmidt with re-orthogonalization. Columns must be
/// numerically independent (relative residual above drop_tol); throws
/// ValidationError otherwise.
Matrix orthonormalize_columns(const Matrix& m, double drop_tol = 1e-10);

namespace detail {

/// In-place cyclic Jacobi sweeps on row-major a (d x d, assumed symmetric).
/// Accumulates rotations into the column-major d x d matrix q (A_in =
/// Q_delta * A_out * Q_delta^T relative to q's initial value) and, when
/// companion != nullptr, applies the same rotations to the rows of the
/// row-major d x companion_cols matrix (Y <- J^T Y), keeping Y = Q^T X in
/// sync. Returns the final off-diagonal Frobenius norm; converged is set when
/// it reached off_target within max_sweeps.
double jacobi_sweeps(double* a, std::size_t d, double* q, double* companion,
                     std::size_t companion_cols, double off_target,
                     int max_sweeps, bool* converged);

/// Solves sum_i w_i * clip(v_i - theta, 0, 1) <= budget for the smallest
/// theta >= 0, by bisection to width_abs. Returns 0 when the untranslated
/// clip already fits the budget.
double clip_shift_for_budget(const std::vector<double>& values,
                             const std::vector<double>& weights, double budget,
                             double width_abs);

}  // namespace detail

}  // namespace fairpca
