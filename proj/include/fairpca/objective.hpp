#pragma once

#include <cstddef>
#include <vector>

#include "fairpca/matrix.hpp"
#include "fairpca/tolerances.hpp"

namespace fairpca {

/// Immutable set of n nonzero targets in R^d with cached squared norms.
/// Targets are stored as the columns of a d x n matrix.
class TargetSet {
 public:
  /// Validates: n >= 1, d >= 1, finite entries, no zero targets.
  static TargetSet from_columns(Matrix targets);

  std::size_t dim() const { return targets_.rows(); }
  std::size_t size() const { return targets_.cols(); }
  const double* target(std::size_t i) const { return targets_.col(i); }
  const Matrix& matrix() const { return targets_; }
  double squared_norm(std::size_t i) const { return squared_norms_[i]; }
  const std::vector<double>& squared_norms() const { return squared_norms_; }
  double min_squared_norm() const;

 private:
  TargetSet() = default;
  Matrix targets_;
  std::vector<double> squared_norms_;
};

/// Offset convention for block scores. target_norm subtracts the block's
/// total squared norm, which makes the score the plain sum of per-column
/// objective values; leading_pca subtracts the best rank-r reconstruction
/// energy instead, so an optimal subspace for a single block scores zero.
enum class BlockOffset { target_norm, leading_pca };

/// Targets grouped into blocks; block i is a d x b_i matrix. The score of a
/// block is its residual energy ||X_i - U U^T X_i||_F^2 minus a per-block
/// offset fixed at construction.
class BlockTargetSet {
 public:
  static BlockTargetSet from_blocks(std::vector<Matrix> blocks,
                                    BlockOffset convention = BlockOffset::target_norm,
                                    std::size_t rank = 0);
  static BlockTargetSet from_blocks_with_offsets(std::vector<Matrix> blocks,
                                                 std::vector<double> offsets);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return blocks_.size(); }
  const Matrix& block(std::size_t i) const { return blocks_[i]; }
  double offset(std::size_t i) const { return offsets_[i]; }
  /// Block energy minus offset, folded at construction so the target_norm
  /// convention contributes an exact zero to the accumulated column values.
  double shift(std::size_t i) const { return shifts_[i]; }

 private:
  BlockTargetSet() = default;
  std::size_t dim_ = 0;
  std::vector<Matrix> blocks_;
  std::vector<double> offsets_;
  std::vector<double> shifts_;
};

/// Per-target objective values at a factor U, the worst (largest) value, and
/// the indices within tolerance of it.
struct ObjectiveProfile {
  std::vector<double> values;
  double worst_value = 0.0;
  std::vector<std::size_t> active_set;
};

/// f_i(U) = ||x_i - U U^T x_i||^2 - ||x_i||^2 for every target, evaluated as
/// y^T (U^T U) y - 2 ||y||^2 with y = U^T x_i, so U U^T is never formed and
/// the cost is O(d r n). The active set collects indices within
/// active_set_rel * max(1, |worst|) of the worst value.
ObjectiveProfile f_values(const FactorMatrix& u, const TargetSet& targets,
                          const Tolerances& tol = default_tolerances());

/// Smallest index attaining the worst value exactly.
std::size_t worst_index(const ObjectiveProfile& profile);

/// Gradient of f_i at U: (x x^T U U^T + U U^T x x^T - 2 x x^T) U, assembled
/// from y = U^T x, z = U y and w = U^T z in O(d r).
Matrix subgradient(const FactorMatrix& u, const TargetSet& targets, std::size_t i);

/// Block variant: score of block i is its residual energy minus its offset.
ObjectiveProfile block_f_values(const FactorMatrix& u, const BlockTargetSet& blocks,
                                const Tolerances& tol = default_tolerances());

struct HarmonicBound {
  double value = 0.0;  // (r/n) * H, H the harmonic mean of the squared norms
  bool a2_holds = false;  // value < min_i ||x_i||^2
  double harmonic_mean = 0.0;
};

/// The analytic optimum of the orthogonal-target problem and whether the
/// non-degeneracy condition holds.
HarmonicBound harmonic_bound(const TargetSet& targets, std::size_t r);

namespace detail {
/// Shared expression for (r/n) * H so call sites agree bitwise.
double harmonic_value(const TargetSet& targets, std::size_t r);
/// Subgradient accumulated into g (d x r, overwritten).
void subgradient_into(const FactorMatrix& u, const double* x, Matrix& g,
                      std::vector<double>& y, std::vector<double>& z,
                      std::vector<double>& w);
}  // namespace detail

}  // namespace fairpca
