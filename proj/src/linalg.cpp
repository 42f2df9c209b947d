#include "fairpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairpca/kernels.hpp"

namespace fairpca {

namespace detail {

namespace {

double offdiag_frobenius(const double* a, std::size_t d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = a[i * d + j];
      acc += 2.0 * v * v;
    }
  return std::sqrt(acc);
}

}  // namespace

double jacobi_sweeps(double* a, std::size_t d, double* q, double* companion,
                     std::size_t companion_cols, double off_target,
                     int max_sweeps, bool* converged) {
  *converged = false;
  if (d < 2) {
    *converged = true;
    return 0.0;
  }
  // Entries below skip_threshold stay untouched within a sweep; their total
  // mass cannot push the off-diagonal norm above off_target.
  const double skip_threshold = off_target / static_cast<double>(d);
  double off = offdiag_frobenius(a, d);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off <= off_target) {
      *converged = true;
      return off;
    }
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t col = p + 1; col < d; ++col) {
        const double apq = a[p * d + col];
        if (std::fabs(apq) <= skip_threshold) continue;
        const double app = a[p * d + p];
        const double aqq = a[col * d + col];
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta > 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Two-sided rotation A <- J^T A J with J mixing axes p,col:
        // row pass (rows are contiguous), then column pass.
        kernels::rot(a + p * d, a + col * d, c, s, d);
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k * d + p];
          const double akq = a[k * d + col];
          a[k * d + p] = c * akp + s * akq;
          a[k * d + col] = c * akq - s * akp;
        }
        // Pin the rotated 2x2 block to its analytic form.
        a[p * d + p] = app + t * apq;
        a[col * d + col] = aqq - t * apq;
        a[p * d + col] = 0.0;
        a[col * d + p] = 0.0;
        if (q != nullptr) kernels::rot(q + p * d, q + col * d, c, s, d);
        if (companion != nullptr)
          kernels::rot(companion + p * companion_cols,
                       companion + col * companion_cols, c, s, companion_cols);
      }
    }
    off = offdiag_frobenius(a, d);
  }
  *converged = off <= off_target;
  return off;
}

double clip_shift_for_budget(const std::vector<double>& values,
                             const std::vector<double>& weights, double budget,
                             double width_abs) {
  auto clipped_sum = [&](double theta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      acc += weights[i] * std::clamp(values[i] - theta, 0.0, 1.0);
    return acc;
  };
  if (clipped_sum(0.0) <= budget) return 0.0;
  double lo = 0.0;
  double hi = *std::max_element(values.begin(), values.end());
  while (hi - lo > width_abs) {
    const double mid = 0.5 * (lo + hi);
    if (clipped_sum(mid) > budget)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

namespace {

void normalize_column_signs(Matrix& q) {
  for (std::size_t j = 0; j < q.cols(); ++j) {
    double* col = q.col(j);
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < q.rows(); ++i) {
      const double mag = std::fabs(col[i]);
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (col[arg] < 0.0) kernels::scal(-1.0, col, q.rows());
  }
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& a, const Tolerances& tol) {
  a.validate_symmetry(tol);
  const std::size_t d = a.dim();
  if (d == 0) throw ValidationError("sym_eig: empty matrix");

  // Work on the exactly symmetrized copy; the input may carry asymmetry up
  // to the entry tolerance.
  std::vector<double> work(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      work[i * d + j] = 0.5 * (a.at(i, j) + a.at(j, i));

  Matrix q = Matrix::identity(d);
  const double norm = a.frobenius_norm();
  bool converged = false;
  const double off = detail::jacobi_sweeps(work.data(), d, q.data(), nullptr, 0,
                                           tol.eig_offdiag_rel * norm,
                                           tol.eig_max_sweeps, &converged);
  if (!converged)
    throw ConvergenceError(
        "sym_eig: Jacobi did not converge in " +
            std::to_string(tol.eig_max_sweeps) +
            " sweeps; off-diagonal residual " + std::to_string(off),
        off);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return work[x * d + x] > work[y * d + y];
  });

  EigenDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors = Matrix(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    out.eigenvalues[k] = work[order[k] * d + order[k]];
    const double* src = q.col(order[k]);
    std::copy(src, src + d, out.eigenvectors.col(k));
  }
  normalize_column_signs(out.eigenvectors);
  return out;
}

ProjectionOperator project_rank_r(const SymMatrix& a, std::size_t r,
                                  const Tolerances& tol) {
  const std::size_t d = a.dim();
  if (r < 1 || r > d)
    throw ValidationError("project_rank_r: need 1 <= r <= d, got r=" +
                          std::to_string(r) + ", d=" + std::to_string(d));
  EigenDecomposition eig = sym_eig(a, tol);
  const double lam_min = eig.eigenvalues.back();
  if (lam_min < -tol.indefinite_rel * a.frobenius_norm())
    throw ValidationError(
        "project_rank_r: input is significantly indefinite (lambda_min = " +
        std::to_string(lam_min) + ")");

  std::size_t positive = 0;
  while (positive < d && eig.eigenvalues[positive] > tol.rank_eig_abs) ++positive;
  const std::size_t retained = std::min(r, positive);

  SymMatrix p(d);
  for (std::size_t k = 0; k < retained; ++k) {
    const double* v = eig.eigenvectors.col(k);
    for (std::size_t i = 0; i < d; ++i)
      kernels::axpy(v[i], v, p.row(i), d);
  }
  return ProjectionOperator{std::move(p), r, retained};
}

SymMatrix project_spectral_box_trace(const SymMatrix& a, std::size_t r,
                                     const Tolerances& tol) {
  const std::size_t d = a.dim();
  if (r < 1 || r > d)
    throw ValidationError("project_spectral_box_trace: need 1 <= r <= d, got r=" +
                          std::to_string(r) + ", d=" + std::to_string(d));
  EigenDecomposition eig = sym_eig(a, tol);
  const std::vector<double> weights(d, 1.0);
  const double theta = detail::clip_shift_for_budget(
      eig.eigenvalues, weights, static_cast<double>(r), tol.bisection_abs);

  SymMatrix out(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double lam = std::clamp(eig.eigenvalues[k] - theta, 0.0, 1.0);
    if (lam == 0.0) continue;
    const double* v = eig.eigenvectors.col(k);
    for (std::size_t i = 0; i < d; ++i)
      kernels::axpy(lam * v[i], v, out.row(i), d);
  }
  // The rank-1 accumulation is symmetric in exact arithmetic; enforce it
  // bitwise so downstream symmetry validation never trips on rounding.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = 0.5 * (out.at(i, j) + out.at(j, i));
      out.at(i, j) = v;
      out.at(j, i) = v;
    }
  return out;
}

double orthonormality_defect(const Matrix& u) {
  const std::size_t r = u.cols();
  double acc = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const double g = kernels::dot(u.col(i), u.col(j), u.rows());
      const double diff = g - (i == j ? 1.0 : 0.0);
      acc += diff * diff;
    }
  return std::sqrt(acc);
}

Matrix orthonormalize_columns(const Matrix& m, double drop_tol) {
  const std::size_t d = m.rows(), r = m.cols();
  if (r > d)
    throw ValidationError("orthonormalize_columns: more columns than rows");
  Matrix q = m;
  for (std::size_t j = 0; j < r; ++j) {
    double* v = q.col(j);
    const double before = std::sqrt(kernels::dot(v, v, d));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const double proj = kernels::dot(q.col(k), v, d);
        kernels::axpy(-proj, q.col(k), v, d);
      }
    }
    const double after = std::sqrt(kernels::dot(v, v, d));
    if (!(after > drop_tol * std::max(1.0, before)))
      throw ValidationError(
          "orthonormalize_columns: column " + std::to_string(j) +
          " is numerically dependent on the previous ones");
    kernels::scal(1.0 / after, v, d);
  }
  return q;
}

}  // namespace fairpca
