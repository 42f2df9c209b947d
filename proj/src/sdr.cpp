#include "fairpca/sdr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairpca/kernels.hpp"

namespace fairpca {

namespace {

struct SpanBasis {
  Matrix v;       // d x m, orthonormal columns spanning the targets
  Matrix coords;  // m x n, column i = V^T x_i
};

SpanBasis build_span(const TargetSet& targets) {
  const std::size_t d = targets.dim(), n = targets.size();
  Matrix basis(d, std::min(d, n));
  std::size_t m = 0;
  std::vector<double> work(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = targets.target(i);
    std::copy(x, x + d, work.data());
    const double norm = std::sqrt(targets.squared_norm(i));
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < m; ++k) {
        const double proj = kernels::dot(basis.col(k), work.data(), d);
        kernels::axpy(-proj, basis.col(k), work.data(), d);
      }
    const double residual = std::sqrt(kernels::dot(work.data(), work.data(), d));
    if (residual > 1e-12 * norm) {
      kernels::scal(1.0 / residual, work.data(), d);
      std::copy(work.data(), work.data() + d, basis.col(m));
      ++m;
    }
  }
  SpanBasis span;
  span.v = Matrix(d, m);
  std::copy(basis.data(), basis.data() + d * m, span.v.data());
  span.coords = Matrix(m, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k)
      span.coords(k, i) = kernels::dot(span.v.col(k), targets.target(i), d);
  return span;
}

// Reduced iterate: the full-space matrix is V (Q diag(lam) Q^T) V^T plus
// comp_eig on the orthogonal complement of the span (multiplicity d - m).
struct ReducedState {
  Matrix q;                 // m x m, column-major
  std::vector<double> lam;  // m
  double comp_eig = 0.0;
};

void materialize_reduced(const ReducedState& st, std::vector<double>& a) {
  const std::size_t m = st.lam.size();
  a.assign(m * m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double* qk = st.q.col(k);
    if (st.lam[k] == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i)
      kernels::axpy(st.lam[k] * qk[i], qk, a.data() + i * m, m);
  }
}

// min_i sum_k lam_k <q_k, x_hat_i>^2 given y = Q^T coords (m x n row-major).
double min_value(const std::vector<double>& lam, const std::vector<double>& y,
                 std::size_t m, std::size_t n, std::size_t* arg) {
  std::vector<double> vals(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double w = lam[k];
    if (w == 0.0) continue;
    const double* row = y.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) vals[i] += w * row[i] * row[i];
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (vals[i] < vals[best]) best = i;
  if (arg != nullptr) *arg = best;
  return vals[best];
}

// Dual objective D(w) = sum of the min(r, m) leading nonnegative eigenvalues
// of sum_i w_i x_hat_i x_hat_i^T; a valid upper bound on the relaxation
// optimum for any weights on the simplex.
double dual_value(const Matrix& coords, const std::vector<double>& weights,
                  std::size_t r) {
  const std::size_t m = coords.rows(), n = coords.cols();
  SymMatrix mix(m);
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] == 0.0) continue;
    const double* x = coords.col(i);
    for (std::size_t a = 0; a < m; ++a)
      kernels::axpy(weights[i] * x[a], x, mix.row(a), m);
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double v = 0.5 * (mix.at(a, b) + mix.at(b, a));
      mix.at(a, b) = v;
      mix.at(b, a) = v;
    }
  EigenDecomposition eig = sym_eig(mix);
  double acc = 0.0;
  for (std::size_t k = 0; k < std::min(r, m); ++k)
    acc += std::max(eig.eigenvalues[k], 0.0);
  return acc;
}

struct EngineResult {
  SpanBasis span;
  ReducedState state;      // reported iterate (averaged and re-projected when enabled)
  std::vector<double> y;   // Q^T coords for the reported iterate, m x n row-major
  double value = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
};

EngineResult run_engine(const TargetSet& targets, std::size_t r,
                        const SdrConfig& cfg, const Tolerances& tol) {
  const std::size_t d = targets.dim(), n = targets.size();
  if (r < 1 || r > d)
    throw ValidationError("solve_sdr: need 1 <= r <= d, got r=" + std::to_string(r) +
                          ", d=" + std::to_string(d));
  if (cfg.max_iters < 1) throw ValidationError("solve_sdr: max_iters must be >= 1");
  if (!(cfg.step > 0.0)) throw ValidationError("solve_sdr: step must be positive");

  EngineResult res;
  res.span = build_span(targets);
  const std::size_t m = res.span.coords.rows();
  const double comp_weight = static_cast<double>(d - m);

  ReducedState st;
  st.q = Matrix::identity(m);
  st.lam.assign(m, static_cast<double>(r) / static_cast<double>(d));
  st.comp_eig = static_cast<double>(r) / static_cast<double>(d);

  // y = Q^T coords, kept in sync with Q through the Jacobi companion hook.
  std::vector<double> y(m * n);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < n; ++i) y[k * n + i] = res.span.coords(k, i);

  std::vector<double> freq(n, 0.0);
  double freq_total = 0.0;
  std::vector<double> b(m * m);
  std::vector<double> w(m);
  std::vector<double> avg_a, cur_a, prev_a;
  double avg_comp = 0.0;
  double prev_comp = 0.0;
  const bool track_dense = cfg.averaging || cfg.tol > 0.0;
  std::vector<double> clip_values(m + 1);
  std::vector<double> clip_weights(m + 1, 1.0);
  clip_weights[m] = comp_weight;

  std::size_t iterations = 0;
  for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
    iterations = t;
    std::size_t worst = 0;
    const double current = min_value(st.lam, y, m, n, &worst);
    if (!std::isfinite(current))
      throw DivergenceError("solve_sdr: non-finite objective at iteration " +
                                std::to_string(t),
                            t);
    const double beta = cfg.step / std::sqrt(static_cast<double>(t));
    freq[worst] += beta;
    freq_total += beta;

    // Ascent step in the current eigenbasis: B = diag(lam) + beta w w^T with
    // w = Q^T x_hat, i.e. column `worst` of y.
    for (std::size_t k = 0; k < m; ++k) w[k] = y[k * n + worst];
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      b[k * m + k] = st.lam[k];
      kernels::axpy(beta * w[k], w.data(), b.data() + k * m, m);
    }
    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    bool converged = false;
    detail::jacobi_sweeps(b.data(), m, st.q.data(), y.data(), n,
                          1e-11 * std::max(1.0, bnorm), 50, &converged);
    for (std::size_t k = 0; k < m; ++k) st.lam[k] = b[k * m + k];

    // Spectral box/trace projection over the joint spectrum, complement
    // eigenvalue carrying multiplicity d - m.
    for (std::size_t k = 0; k < m; ++k) clip_values[k] = st.lam[k];
    clip_values[m] = st.comp_eig;
    const double theta = detail::clip_shift_for_budget(
        clip_values, clip_weights, static_cast<double>(r), tol.bisection_abs);
    for (std::size_t k = 0; k < m; ++k)
      st.lam[k] = std::clamp(st.lam[k] - theta, 0.0, 1.0);
    st.comp_eig = std::clamp(st.comp_eig - theta, 0.0, 1.0);

    if (track_dense) {
      materialize_reduced(st, cur_a);
      if (cfg.averaging) {
        if (avg_a.empty()) avg_a.assign(m * m, 0.0);
        for (std::size_t i = 0; i < cur_a.size(); ++i) avg_a[i] += cur_a[i];
        avg_comp += st.comp_eig;
      }
      if (cfg.tol > 0.0 && !prev_a.empty()) {
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < cur_a.size(); ++i) {
          const double e = cur_a[i] - prev_a[i];
          diff += e * e;
          scale += cur_a[i] * cur_a[i];
        }
        const double dc = st.comp_eig - prev_comp;
        diff += comp_weight * dc * dc;
        scale += comp_weight * st.comp_eig * st.comp_eig;
        if (std::sqrt(diff) <= cfg.tol * std::max(1.0, std::sqrt(scale))) break;
      }
      prev_a = cur_a;
      prev_comp = st.comp_eig;
    }
  }

  if (cfg.averaging) {
    const double inv = 1.0 / static_cast<double>(iterations);
    for (double& v : avg_a) v *= inv;
    avg_comp *= inv;
    // Eigendecompose the averaged matrix, then re-project the joint spectrum.
    Matrix q_avg = Matrix::identity(m);
    double anorm = 0.0;
    for (double v : avg_a) anorm += v * v;
    anorm = std::sqrt(anorm);
    bool converged = false;
    detail::jacobi_sweeps(avg_a.data(), m, q_avg.data(), nullptr, 0,
                          1e-12 * std::max(1.0, anorm), tol.eig_max_sweeps,
                          &converged);
    ReducedState avg_state;
    avg_state.q = std::move(q_avg);
    avg_state.lam.resize(m);
    for (std::size_t k = 0; k < m; ++k) avg_state.lam[k] = avg_a[k * m + k];
    avg_state.comp_eig = avg_comp;
    for (std::size_t k = 0; k < m; ++k) clip_values[k] = avg_state.lam[k];
    clip_values[m] = avg_state.comp_eig;
    const double theta = detail::clip_shift_for_budget(
        clip_values, clip_weights, static_cast<double>(r), tol.bisection_abs);
    for (std::size_t k = 0; k < m; ++k)
      avg_state.lam[k] = std::clamp(avg_state.lam[k] - theta, 0.0, 1.0);
    avg_state.comp_eig = std::clamp(avg_state.comp_eig - theta, 0.0, 1.0);
    st = std::move(avg_state);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i)
        y[k * n + i] = kernels::dot(st.q.col(k), res.span.coords.col(i), m);
  }

  res.state = std::move(st);
  res.value = min_value(res.state.lam, y, m, n, nullptr);
  res.y = std::move(y);
  res.iterations = iterations;

  // Dual witnesses: inverse-norm weights (exact for orthogonal targets),
  // step-weighted pick frequencies, uniform. Any of them certifies an upper
  // bound; keep the tightest.
  std::vector<double> cand(n);
  double inv_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) inv_sum += 1.0 / targets.squared_norm(i);
  for (std::size_t i = 0; i < n; ++i)
    cand[i] = (1.0 / targets.squared_norm(i)) / inv_sum;
  double bound = dual_value(res.span.coords, cand, r);
  if (freq_total > 0.0) {
    for (std::size_t i = 0; i < n; ++i) cand[i] = freq[i] / freq_total;
    bound = std::min(bound, dual_value(res.span.coords, cand, r));
  }
  std::fill(cand.begin(), cand.end(), 1.0 / static_cast<double>(n));
  bound = std::min(bound, dual_value(res.span.coords, cand, r));
  res.gap = std::max(0.0, bound - res.value);
  return res;
}

}  // namespace

SdrSolution solve_sdr(const TargetSet& targets, std::size_t r, const SdrConfig& cfg) {
  const Tolerances& tol = default_tolerances();
  EngineResult engine = run_engine(targets, r, cfg, tol);
  const std::size_t d = targets.dim();
  const std::size_t m = engine.state.lam.size();

  // P = comp_eig * I + sum_k (lam_k - comp_eig) (V q_k)(V q_k)^T
  SymMatrix p(d);
  Matrix lifted(d, m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      kernels::axpy(engine.state.q(j, k), engine.span.v.col(j), lifted.col(k), d);
  for (std::size_t i = 0; i < d; ++i) p.at(i, i) = engine.state.comp_eig;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = engine.state.lam[k] - engine.state.comp_eig;
    if (w == 0.0) continue;
    const double* v = lifted.col(k);
    for (std::size_t i = 0; i < d; ++i) kernels::axpy(w * v[i], v, p.row(i), d);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = 0.5 * (p.at(i, j) + p.at(j, i));
      p.at(i, j) = v;
      p.at(j, i) = v;
    }

  SdrSolution sol;
  sol.method = SdrMethod::first_order;
  sol.iterations = engine.iterations;
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> z(d);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double* x = targets.target(i);
    for (std::size_t row = 0; row < d; ++row) z[row] = kernels::dot(p.row(row), x, d);
    value = std::min(value, kernels::dot(z.data(), x, d));
  }
  sol.value = value;
  sol.gap = std::max(0.0, engine.value + engine.gap - value);
  sol.trace_residual = std::max(0.0, p.trace() - static_cast<double>(r));
  double lam_max = engine.state.comp_eig, lam_min = engine.state.comp_eig;
  for (double lam : engine.state.lam) {
    lam_max = std::max(lam_max, lam);
    lam_min = std::min(lam_min, lam);
  }
  if (m == d) lam_min = *std::min_element(engine.state.lam.begin(), engine.state.lam.end());
  sol.box_residual = std::max({0.0, lam_max - 1.0, -lam_min});
  sol.p = std::move(p);
  return sol;
}

SdrSolution sdr_orthogonal_closed_form(const TargetSet& targets, std::size_t r,
                                       const Tolerances& tol) {
  const std::size_t d = targets.dim(), n = targets.size();
  if (r < 1 || r > d)
    throw ValidationError("sdr_orthogonal_closed_form: need 1 <= r <= d");
  double worst_pair = 0.0;
  std::size_t worst_i = 0, worst_j = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ip = std::fabs(kernels::dot(targets.target(i), targets.target(j), d)) /
                        std::sqrt(targets.squared_norm(i) * targets.squared_norm(j));
      if (ip > worst_pair) {
        worst_pair = ip;
        worst_i = i;
        worst_j = j;
      }
    }
  if (worst_pair > tol.ortho_pair_rel)
    throw ValidationError(
        "sdr_orthogonal_closed_form: targets " + std::to_string(worst_i) + " and " +
        std::to_string(worst_j) + " are not orthogonal (normalized inner product " +
        std::to_string(worst_pair) + ")");

  const double value = detail::harmonic_value(targets, r);
  if (!(value < targets.min_squared_norm()))
    throw ValidationError(
        "sdr_orthogonal_closed_form: assumption A2 fails: (r/n) H = " +
        std::to_string(value) + " is not below min ||x||^2 = " +
        std::to_string(targets.min_squared_norm()));

  SdrSolution sol;
  sol.method = SdrMethod::closed_form;
  sol.value = value;
  sol.gap = 0.0;
  sol.iterations = 0;
  SymMatrix p(d);
  double diag_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pii = value / targets.squared_norm(i);
    diag_max = std::max(diag_max, pii);
    const double scale = pii / targets.squared_norm(i);  // p_ii over ||x||^2 for raw x
    const double* x = targets.target(i);
    for (std::size_t a = 0; a < d; ++a)
      kernels::axpy(scale * x[a], x, p.row(a), d);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = 0.5 * (p.at(i, j) + p.at(j, i));
      p.at(i, j) = v;
      p.at(j, i) = v;
    }
  sol.trace_residual = std::max(0.0, p.trace() - static_cast<double>(r));
  sol.box_residual = std::max(0.0, diag_max - 1.0);
  sol.p = std::move(p);
  return sol;
}

RoundedProjection round_prsdr(const SdrSolution& sol, const TargetSet& targets,
                              std::size_t r, const Tolerances& tol) {
  RoundedProjection out;
  out.projection = project_rank_r(sol.p, r, tol);
  const std::size_t d = sol.p.dim();
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> z(d);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double* x = targets.target(i);
    for (std::size_t row = 0; row < d; ++row)
      z[row] = kernels::dot(out.projection.matrix.row(row), x, d);
    value = std::min(value, kernels::dot(z.data(), x, d));
  }
  out.value = value;
  return out;
}

namespace detail {

SdrBounds sdr_bounds(const TargetSet& targets, std::size_t r, const SdrConfig& cfg) {
  const Tolerances& tol = default_tolerances();
  EngineResult engine = run_engine(targets, r, cfg, tol);
  const std::size_t m = engine.state.lam.size(), n = targets.size();
  const std::size_t d = targets.dim();

  SdrBounds out;
  out.value = engine.value;
  out.gap = engine.gap;
  out.iterations = engine.iterations;

  // Rank-r rounding on the reduced spectrum: complement directions are
  // orthogonal to every target and contribute nothing to the value. Ties
  // between span and complement eigenvalues go to the span.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return engine.state.lam[a] > engine.state.lam[b];
  });
  std::vector<double> vals(n, 0.0);
  std::size_t taken = 0, idx = 0, comp_left = d - m;
  while (taken < r) {
    const double span_eig = idx < m ? engine.state.lam[order[idx]] : -1.0;
    if (comp_left > 0 && engine.state.comp_eig > span_eig) {
      if (engine.state.comp_eig <= tol.rank_eig_abs) break;
      ++taken;
      --comp_left;
      continue;
    }
    if (idx >= m || span_eig <= tol.rank_eig_abs) break;
    const double* row = engine.y.data() + order[idx] * n;
    for (std::size_t i = 0; i < n; ++i) vals[i] += row[i] * row[i];
    ++idx;
    ++taken;
  }
  out.rounded_value = *std::min_element(vals.begin(), vals.end());
  return out;
}

}  // namespace detail

}  // namespace fairpca
