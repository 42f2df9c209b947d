#include "fairpca/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace fairpca::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = c * x[i] + s * y[i];
    y[i] = c * y[i] - s * x[i];
    x[i] = t;
  }
}

const Ops kScalar{dot_scalar, axpy_scalar, scal_scalar, rot_scalar, "scalar"};

const Ops& select() {
  const char* req = std::getenv("FAIRPCA_KERNELS");
  if (req != nullptr && std::strcmp(req, "scalar") == 0) return kScalar;
  const Ops* avx2 = avx2_ops();
  if (req != nullptr && std::strcmp(req, "avx2") == 0)
    return avx2 != nullptr ? *avx2 : kScalar;
  return avx2 != nullptr ? *avx2 : kScalar;
}

}  // namespace

const Ops& scalar_ops() { return kScalar; }

const Ops& active() {
  static const Ops& picked = select();
  return picked;
}

}  // namespace fairpca::kernels
