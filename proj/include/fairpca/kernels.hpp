#pragma once

#include <cstddef>

namespace fairpca::kernels {

/// Table of the vectorizable inner-loop primitives. Scalar reference
/// implementations always exist; SIMD variants are selected at runtime when
/// the CPU supports them. All variants produce identical results for a given
/// lane structure, but SIMD accumulation order differs from scalar, so
/// cross-variant comparisons are tolerance-based (see the equivalence tests).
struct Ops {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x[i] *= alpha
  void (*scal)(double alpha, double* x, std::size_t n);
  // plane rotation, BLAS drot convention:
  // (x[i], y[i]) <- (c*x[i] + s*y[i], c*y[i] - s*x[i])
  void (*rot)(double* x, double* y, double c, double s, std::size_t n);
  const char* name;
};

/// Scalar reference table. Always available.
const Ops& scalar_ops();

/// AVX2+FMA table, or nullptr when the build target or the running CPU
/// lacks support.
const Ops* avx2_ops();

/// The table used by the library. Picks the widest supported variant once at
/// first use; FAIRPCA_KERNELS=scalar|avx2 overrides the choice (an
/// unsupported request falls back to scalar).
const Ops& active();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline void scal(double alpha, double* x, std::size_t n) {
  active().scal(alpha, x, n);
}
inline void rot(double* x, double* y, double c, double s, std::size_t n) {
  active().rot(x, y, c, s, n);
}

}  // namespace fairpca::kernels
