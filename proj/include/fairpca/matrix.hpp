#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fairpca/errors.hpp"
#include "fairpca/tolerances.hpp"

namespace fairpca {

/// Dense column-major matrix. Columns are contiguous, which is the access
/// pattern of every hot loop here (targets, factor columns, eigenvectors).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (double v : data_) acc += v * v;
    return std::sqrt(acc);
  }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// A d x r factor with dim = rows() and rank = cols(). Kept as a plain matrix;
/// solvers enforce rank <= dim and finiteness where it matters.
using FactorMatrix = Matrix;

/// Square matrix carrying symmetric data, row-major full storage. Building
/// one directly is trusted; validate_symmetry() implements the entry-level
/// check used by operations whose inputs come from outside.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}

  static SymMatrix identity(std::size_t dim) {
    SymMatrix s(dim);
    for (std::size_t i = 0; i < dim; ++i) s.at(i, i) = 1.0;
    return s;
  }

  std::size_t dim() const { return dim_; }

  double& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  double* row(std::size_t i) { return a_.data() + i * dim_; }
  const double* row(std::size_t i) const { return a_.data() + i * dim_; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
    return t;
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (double v : a_) acc += v * v;
    return std::sqrt(acc);
  }

  /// Largest violation of |a_ij - a_ji| <= rel * max(1, |a_ij|), reported as
  /// the violation ratio (0 when exactly symmetric).
  double max_asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j) {
        const double diff = std::fabs(at(i, j) - at(j, i));
        const double scale = std::max(1.0, std::fabs(at(i, j)));
        worst = std::max(worst, diff / scale);
      }
    return worst;
  }

  void validate_symmetry(const Tolerances& tol = default_tolerances()) const {
    const double asym = max_asymmetry();
    if (asym > tol.symmetry_rel)
      throw ValidationError("matrix is not symmetric: max relative asymmetry " +
                            std::to_string(asym) + " exceeds " +
                            std::to_string(tol.symmetry_rel));
  }

  bool operator==(const SymMatrix& other) const {
    return dim_ == other.dim_ && a_ == other.a_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> a_;
};

}  // namespace fairpca
