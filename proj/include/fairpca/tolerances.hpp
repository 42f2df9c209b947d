#pragma once

namespace fairpca {

/// Numerical tolerances shared across the library. Every routine that needs a
/// threshold takes a Tolerances argument defaulting to this record, so the
/// values live in exactly one place.
struct Tolerances {
  /// Entry agreement required of a symmetric matrix:
  /// |a_ij - a_ji| <= symmetry_rel * max(1, |a_ij|).
  double symmetry_rel = 1e-12;

  /// Jacobi eigensolver stop: off-diagonal Frobenius norm <= eig_offdiag_rel * ||A||_F.
  double eig_offdiag_rel = 1e-12;

  /// Jacobi sweep cap before raising ConvergenceError.
  int eig_max_sweeps = 100;

  /// Indefinite-input rejection for rank projections:
  /// error when lambda_min < -indefinite_rel * ||A||_F.
  double indefinite_rel = 1e-6;

  /// Absolute eigenvalue threshold for counting retained directions.
  double rank_eig_abs = 1e-8;

  /// Bisection interval width for the spectral box/trace projection.
  double bisection_abs = 1e-12;

  /// Relative width of the active set around the worst objective value.
  double active_set_rel = 1e-9;

  /// Orthogonality gate for the closed-form SDR: pairwise normalized inner
  /// products must not exceed this.
  double ortho_pair_rel = 1e-8;

  /// Column-orthonormality defect allowed when exporting a factor as a frame.
  double frame_defect_max = 1e-6;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace fairpca
