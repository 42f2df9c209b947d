#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairpca/matrix.hpp"
#include "fairpca/objective.hpp"

namespace fairpca {

enum class FfpcaInit { gaussian, semi_orthogonal, warm_start };

enum class StopReason { max_iters, stalled };

struct FfpcaConfig {
  double eta = 1.0;              // base step; iteration t uses eta / t
  std::size_t max_iters = 20000;
  double rel_tol = 1e-6;         // relative best-value improvement threshold
  std::size_t patience = 200;    // iterations without improvement before stopping
  std::uint64_t seed = 0;
  FfpcaInit init = FfpcaInit::gaussian;
  std::optional<FactorMatrix> warm;  // required when init == warm_start
};

/// Full record of one solver run. best_u is the best iterate seen, not the
/// last one; the per-iteration traces make runs auditable and reproducible.
struct SolveReport {
  FactorMatrix best_u;
  double best_value = 0.0;                 // max_i f_i at best_u
  std::vector<double> objective_trace;     // worst value at each iterate
  std::vector<std::uint32_t> active_trace; // index chosen at each iterate
  std::size_t iterations = 0;
  StopReason stop_reason = StopReason::max_iters;
  std::uint64_t seed = 0;
};

/// Subgradient descent on max_i f_i(U): at iteration t (1-based) picks the
/// worst index and steps U <- U - (eta/t) * G. Stops at max_iters or when the
/// best value has not improved by rel_tol (relative) for patience consecutive
/// iterations. Throws DivergenceError when the objective turns non-finite,
/// ValidationError on bad configuration. A feasible projection is
/// project_rank_r(best_u * best_u^T, r).
SolveReport solve_ffpca(const TargetSet& targets, std::size_t r,
                        const FfpcaConfig& cfg);

/// Runs solve_ffpca with seeds cfg.seed .. cfg.seed + k - 1 and returns the
/// report with the smallest best_value (ties to the lowest seed). Diverged
/// starts are skipped; throws DivergenceError only when every start diverges.
SolveReport multi_start(const TargetSet& targets, std::size_t r,
                        const FfpcaConfig& cfg, std::size_t k);

/// Initial factor for a given seed: i.i.d. N(0, 1/d) entries, drawn column by
/// column; semi_orthogonal orthonormalizes the same draw.
FactorMatrix initial_factor(std::size_t d, std::size_t r, const FfpcaConfig& cfg);

}  // namespace fairpca
