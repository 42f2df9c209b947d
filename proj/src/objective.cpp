#include "fairpca/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairpca/kernels.hpp"
#include "fairpca/linalg.hpp"

namespace fairpca {

namespace {

void check_dims(const FactorMatrix& u, std::size_t target_dim, const char* op) {
  if (u.rows() != target_dim)
    throw ValidationError(std::string(op) + ": factor is " +
                          std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                          " but targets live in R^" + std::to_string(target_dim));
  if (u.cols() > u.rows())
    throw ValidationError(std::string(op) + ": factor rank " +
                          std::to_string(u.cols()) + " exceeds dimension " +
                          std::to_string(u.rows()));
}

// Gram matrix C = U^T U, column-major r x r.
Matrix gram(const FactorMatrix& u) {
  const std::size_t r = u.cols();
  Matrix c(r, r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const double g = kernels::dot(u.col(i), u.col(j), u.rows());
      c(i, j) = g;
      c(j, i) = g;
    }
  return c;
}

// ||x - U U^T x||^2 - ||x||^2 given y = U^T x and C = U^T U:
// y^T C y - 2 ||y||^2.
double column_value(const Matrix& c, const std::vector<double>& y) {
  const std::size_t r = y.size();
  double quad = 0.0, sq = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    quad += y[j] * kernels::dot(c.col(j), y.data(), r);
    sq += y[j] * y[j];
  }
  return quad - 2.0 * sq;
}

void finish_profile(ObjectiveProfile& profile, const Tolerances& tol) {
  profile.worst_value = *std::max_element(profile.values.begin(), profile.values.end());
  const double active_tol = tol.active_set_rel * std::max(1.0, std::fabs(profile.worst_value));
  profile.active_set.clear();
  for (std::size_t i = 0; i < profile.values.size(); ++i)
    if (profile.values[i] >= profile.worst_value - active_tol)
      profile.active_set.push_back(i);
}

}  // namespace

TargetSet TargetSet::from_columns(Matrix targets) {
  if (targets.rows() < 1 || targets.cols() < 1)
    throw ValidationError("TargetSet: need at least one target in R^d, d >= 1");
  if (!targets.all_finite())
    throw ValidationError("TargetSet: targets contain non-finite entries");
  TargetSet t;
  t.squared_norms_.resize(targets.cols());
  for (std::size_t i = 0; i < targets.cols(); ++i) {
    const double sq = kernels::dot(targets.col(i), targets.col(i), targets.rows());
    if (!(sq > 0.0))
      throw ValidationError("TargetSet: target " + std::to_string(i) +
                            " has zero norm; the harmonic bound and A2 are "
                            "undefined for zero targets");
    t.squared_norms_[i] = sq;
  }
  t.targets_ = std::move(targets);
  return t;
}

double TargetSet::min_squared_norm() const {
  return *std::min_element(squared_norms_.begin(), squared_norms_.end());
}

BlockTargetSet BlockTargetSet::from_blocks(std::vector<Matrix> blocks,
                                           BlockOffset convention,
                                           std::size_t rank) {
  if (convention == BlockOffset::leading_pca && rank < 1)
    throw ValidationError("BlockTargetSet: the leading_pca convention needs the rank");
  std::vector<double> offsets(blocks.size(), 0.0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Matrix& x = blocks[i];
    double energy = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c)
      energy += kernels::dot(x.col(c), x.col(c), x.rows());
    if (convention == BlockOffset::target_norm) {
      offsets[i] = energy;
    } else {
      // Leading-r eigenvalue sum of X X^T via the column Gram matrix, which
      // shares its nonzero spectrum.
      const std::size_t b = x.cols();
      SymMatrix g(b);
      for (std::size_t a = 0; a < b; ++a)
        for (std::size_t c = a; c < b; ++c) {
          const double v = kernels::dot(x.col(a), x.col(c), x.rows());
          g.at(a, c) = v;
          g.at(c, a) = v;
        }
      EigenDecomposition eig = sym_eig(g);
      double sum = 0.0;
      for (std::size_t k = 0; k < std::min(rank, b); ++k)
        sum += std::max(eig.eigenvalues[k], 0.0);
      offsets[i] = sum;
    }
  }
  return from_blocks_with_offsets(std::move(blocks), std::move(offsets));
}

BlockTargetSet BlockTargetSet::from_blocks_with_offsets(std::vector<Matrix> blocks,
                                                        std::vector<double> offsets) {
  if (blocks.empty()) throw ValidationError("BlockTargetSet: no blocks");
  if (offsets.size() != blocks.size())
    throw ValidationError("BlockTargetSet: offset count does not match block count");
  BlockTargetSet set;
  set.dim_ = blocks.front().rows();
  set.shifts_.resize(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Matrix& x = blocks[i];
    if (x.rows() != set.dim_)
      throw ValidationError("BlockTargetSet: block " + std::to_string(i) +
                            " has dimension " + std::to_string(x.rows()) +
                            ", expected " + std::to_string(set.dim_));
    if (x.cols() < 1)
      throw ValidationError("BlockTargetSet: block " + std::to_string(i) + " is empty");
    if (!x.all_finite())
      throw ValidationError("BlockTargetSet: block " + std::to_string(i) +
                            " has non-finite entries");
    double energy = 0.0;
    bool nonzero = false;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double sq = kernels::dot(x.col(c), x.col(c), x.rows());
      energy += sq;
      nonzero = nonzero || sq > 0.0;
    }
    if (!nonzero)
      throw ValidationError("BlockTargetSet: block " + std::to_string(i) +
                            " has no nonzero column");
    set.shifts_[i] = energy - offsets[i];
  }
  set.blocks_ = std::move(blocks);
  set.offsets_ = std::move(offsets);
  return set;
}

ObjectiveProfile f_values(const FactorMatrix& u, const TargetSet& targets,
                          const Tolerances& tol) {
  check_dims(u, targets.dim(), "f_values");
  const std::size_t n = targets.size(), r = u.cols(), d = u.rows();
  const Matrix c = gram(u);
  ObjectiveProfile profile;
  profile.values.resize(n);
  std::vector<double> y(r);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = targets.target(i);
    for (std::size_t j = 0; j < r; ++j) y[j] = kernels::dot(u.col(j), x, d);
    profile.values[i] = column_value(c, y);
  }
  finish_profile(profile, tol);
  return profile;
}

std::size_t worst_index(const ObjectiveProfile& profile) {
  for (std::size_t i = 0; i < profile.values.size(); ++i)
    if (profile.values[i] == profile.worst_value) return i;
  throw ValidationError("worst_index: profile has no entry equal to worst_value");
}

namespace detail {

void subgradient_into(const FactorMatrix& u, const double* x, Matrix& g,
                      std::vector<double>& y, std::vector<double>& z,
                      std::vector<double>& w) {
  const std::size_t d = u.rows(), r = u.cols();
  y.resize(r);
  w.resize(r);
  z.assign(d, 0.0);
  for (std::size_t j = 0; j < r; ++j) y[j] = kernels::dot(u.col(j), x, d);
  for (std::size_t j = 0; j < r; ++j) kernels::axpy(y[j], u.col(j), z.data(), d);
  for (std::size_t j = 0; j < r; ++j) w[j] = kernels::dot(u.col(j), z.data(), d);
  // G = x (w - 2y)^T + z y^T
  if (g.rows() != d || g.cols() != r)
    g = Matrix(d, r);
  else
    std::fill(g.data(), g.data() + d * r, 0.0);
  for (std::size_t j = 0; j < r; ++j) {
    kernels::axpy(w[j] - 2.0 * y[j], x, g.col(j), d);
    kernels::axpy(y[j], z.data(), g.col(j), d);
  }
}

double harmonic_value(const TargetSet& targets, std::size_t r) {
  double inv_sum = 0.0;
  for (double sq : targets.squared_norms()) inv_sum += 1.0 / sq;
  const double h = static_cast<double>(targets.size()) / inv_sum;
  return static_cast<double>(r) / static_cast<double>(targets.size()) * h;
}

}  // namespace detail

Matrix subgradient(const FactorMatrix& u, const TargetSet& targets, std::size_t i) {
  check_dims(u, targets.dim(), "subgradient");
  if (i >= targets.size())
    throw ValidationError("subgradient: index " + std::to_string(i) +
                          " out of range for " + std::to_string(targets.size()) +
                          " targets");
  Matrix g;
  std::vector<double> y, z, w;
  detail::subgradient_into(u, targets.target(i), g, y, z, w);
  return g;
}

ObjectiveProfile block_f_values(const FactorMatrix& u, const BlockTargetSet& blocks,
                                const Tolerances& tol) {
  check_dims(u, blocks.dim(), "block_f_values");
  const std::size_t r = u.cols(), d = u.rows();
  const Matrix c = gram(u);
  ObjectiveProfile profile;
  profile.values.resize(blocks.size());
  std::vector<double> y(r);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Matrix& x = blocks.block(i);
    double acc = 0.0;
    for (std::size_t col = 0; col < x.cols(); ++col) {
      for (std::size_t j = 0; j < r; ++j)
        y[j] = kernels::dot(u.col(j), x.col(col), d);
      acc += column_value(c, y);
    }
    profile.values[i] = acc + blocks.shift(i);
  }
  finish_profile(profile, tol);
  return profile;
}

HarmonicBound harmonic_bound(const TargetSet& targets, std::size_t r) {
  if (r < 1 || r > targets.dim())
    throw ValidationError("harmonic_bound: need 1 <= r <= d, got r=" +
                          std::to_string(r) + ", d=" + std::to_string(targets.dim()));
  HarmonicBound out;
  out.value = detail::harmonic_value(targets, r);
  out.harmonic_mean = out.value * static_cast<double>(targets.size()) /
                      static_cast<double>(r);
  out.a2_holds = out.value < targets.min_squared_norm();
  return out;
}

}  // namespace fairpca
