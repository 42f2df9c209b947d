#pragma once

#include <cstdint>
#include <vector>

#include "fairpca/linalg.hpp"
#include "fairpca/matrix.hpp"
#include "fairpca/objective.hpp"

namespace fairpca {

enum class SdrMethod { first_order, closed_form };

struct SdrConfig {
  std::size_t max_iters = 2500;
  double step = 1.0;      // iteration t ascends by step / sqrt(t)
  bool averaging = true;  // report the re-projected running-average iterate
  double tol = 1e-10;     // stop when the relative iterate movement drops below this
  std::uint64_t seed = 0; // recorded in reports; the method itself draws nothing
};

/// A feasible point of {0 <= P <= I, Tr P <= r} with its objective value and
/// diagnostics. gap is a certified bound on the remaining suboptimality: the
/// true relaxation optimum is at most value + gap (from a dual witness, see
/// solve_sdr), so value + gap upper-bounds every feasible projection's
/// objective.
struct SdrSolution {
  SymMatrix p;
  double value = 0.0;           // min_i x_i^T P x_i, recomputed from p
  double trace_residual = 0.0;  // max(0, Tr P - r)
  double box_residual = 0.0;    // max(0, lambda_max - 1, -lambda_min)
  double gap = 0.0;             // stall diagnostic: certified optimality gap bound
  SdrMethod method = SdrMethod::first_order;
  std::size_t iterations = 0;
};

/// Projected supergradient ascent on min_i x_i^T P x_i over the relaxed set,
/// initialized at P = (r/d) I: each iteration adds (step/sqrt(t)) x x^T for
/// the current worst target and re-projects via the spectral box/trace map.
/// Iterates are maintained on span{x_i} plus an isotropic complement, which
/// reproduces the full-space iteration exactly at O(m^3) per step, m the
/// span dimension. The gap comes from evaluating the dual objective
/// sum of the r leading eigenvalues of sum_i w_i x_i x_i^T at a few cheap
/// weight candidates; any such witness upper-bounds the optimum.
SdrSolution solve_sdr(const TargetSet& targets, std::size_t r, const SdrConfig& cfg);

/// Exact solution for pairwise-orthogonal targets: in the normalized target
/// basis P is diagonal with entries (r/n) H / ||x_i||^2, value (r/n) H, trace
/// exactly r. Throws ValidationError when some pair exceeds the orthogonality
/// gate or when the non-degeneracy condition (r/n) H < min ||x_i||^2 fails.
SdrSolution sdr_orthogonal_closed_form(const TargetSet& targets, std::size_t r,
                                       const Tolerances& tol = default_tolerances());

struct RoundedProjection {
  ProjectionOperator projection;
  double value = 0.0;  // min_i x_i^T P x_i of the rounded projection
};

/// Feasible rounding: keeps the r leading eigendirections of sol.p. The
/// reported value is a lower bound on the problem optimum by construction.
RoundedProjection round_prsdr(const SdrSolution& sol, const TargetSet& targets,
                              std::size_t r,
                              const Tolerances& tol = default_tolerances());

namespace detail {

/// Slim result for experiment sweeps: no d x d materialization. The rounding
/// here selects leading eigendirections on the reduced representation and is
/// equivalence-tested against round_prsdr.
struct SdrBounds {
  double value = 0.0;
  double gap = 0.0;
  double rounded_value = 0.0;
  std::size_t iterations = 0;
};
SdrBounds sdr_bounds(const TargetSet& targets, std::size_t r, const SdrConfig& cfg);

}  // namespace detail

}  // namespace fairpca
