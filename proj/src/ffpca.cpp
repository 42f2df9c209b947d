#include "fairpca/ffpca.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fairpca/kernels.hpp"
#include "fairpca/linalg.hpp"
#include "fairpca/rng.hpp"

namespace fairpca {

namespace {

void validate(const FfpcaConfig& cfg, std::size_t d, std::size_t r) {
  if (!(cfg.eta > 0.0)) throw ValidationError("solve_ffpca: eta must be positive");
  if (cfg.max_iters < 1) throw ValidationError("solve_ffpca: max_iters must be >= 1");
  if (!(cfg.rel_tol >= 0.0 && cfg.rel_tol < 1.0))
    throw ValidationError("solve_ffpca: rel_tol must lie in [0, 1)");
  if (cfg.patience < 1) throw ValidationError("solve_ffpca: patience must be >= 1");
  if (r < 1 || r > d)
    throw ValidationError("solve_ffpca: need 1 <= r <= d, got r=" + std::to_string(r) +
                          ", d=" + std::to_string(d));
  if (cfg.init == FfpcaInit::warm_start) {
    if (!cfg.warm.has_value())
      throw ValidationError("solve_ffpca: warm_start init without a warm factor");
    if (cfg.warm->rows() != d || cfg.warm->cols() != r)
      throw ValidationError("solve_ffpca: warm factor is " +
                            std::to_string(cfg.warm->rows()) + "x" +
                            std::to_string(cfg.warm->cols()) + ", expected " +
                            std::to_string(d) + "x" + std::to_string(r));
  }
}

}  // namespace

FactorMatrix initial_factor(std::size_t d, std::size_t r, const FfpcaConfig& cfg) {
  if (cfg.init == FfpcaInit::warm_start) return *cfg.warm;
  Rng rng(cfg.seed);
  Matrix u(d, r);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < r; ++j) {
    double* col = u.col(j);
    for (std::size_t i = 0; i < d; ++i) col[i] = scale * rng.normal();
  }
  if (cfg.init == FfpcaInit::semi_orthogonal) return orthonormalize_columns(u);
  return u;
}

SolveReport solve_ffpca(const TargetSet& targets, std::size_t r,
                        const FfpcaConfig& cfg) {
  const std::size_t d = targets.dim();
  validate(cfg, d, r);

  FactorMatrix u = initial_factor(d, r, cfg);
  SolveReport report;
  report.seed = cfg.seed;
  report.objective_trace.reserve(std::min<std::size_t>(cfg.max_iters, 1 << 16));
  report.active_trace.reserve(std::min<std::size_t>(cfg.max_iters, 1 << 16));

  double best = std::numeric_limits<double>::infinity();
  std::size_t stall = 0;
  Matrix g;
  std::vector<double> y, z, w;

  for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
    const ObjectiveProfile profile = f_values(u, targets);
    if (!std::isfinite(profile.worst_value))
      throw DivergenceError("solve_ffpca: non-finite objective at iteration " +
                                std::to_string(t) + " (seed " +
                                std::to_string(cfg.seed) + ")",
                            t);
    const std::size_t picked = worst_index(profile);
    report.objective_trace.push_back(profile.worst_value);
    report.active_trace.push_back(static_cast<std::uint32_t>(picked));
    report.iterations = t;

    if (profile.worst_value < best) {
      const bool significant =
          !std::isfinite(best) ||
          best - profile.worst_value > cfg.rel_tol * std::fabs(best);
      best = profile.worst_value;
      report.best_u = u;
      report.best_value = best;
      stall = significant ? 0 : stall + 1;
    } else {
      ++stall;
    }
    if (stall >= cfg.patience) {
      report.stop_reason = StopReason::stalled;
      return report;
    }

    detail::subgradient_into(u, targets.target(picked), g, y, z, w);
    const double step = -cfg.eta / static_cast<double>(t);
    for (std::size_t j = 0; j < u.cols(); ++j)
      kernels::axpy(step, g.col(j), u.col(j), d);
  }
  report.stop_reason = StopReason::max_iters;
  return report;
}

SolveReport multi_start(const TargetSet& targets, std::size_t r,
                        const FfpcaConfig& cfg, std::size_t k) {
  if (k < 1) throw ValidationError("multi_start: k must be >= 1");
  std::optional<SolveReport> best;
  std::size_t diverged = 0;
  std::string last_error;
  for (std::size_t s = 0; s < k; ++s) {
    FfpcaConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + s;
    try {
      SolveReport report = solve_ffpca(targets, r, run_cfg);
      if (!best.has_value() || report.best_value < best->best_value)
        best = std::move(report);
    } catch (const DivergenceError& e) {
      ++diverged;
      last_error = e.what();
    }
  }
  if (!best.has_value())
    throw DivergenceError("multi_start: all " + std::to_string(k) +
                              " starts diverged; last: " + last_error,
                          diverged);
  return *best;
}

}  // namespace fairpca
