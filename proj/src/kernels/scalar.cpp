#include "mevsim/kernels.hpp"

#include <cmath>

namespace mevsim::kernels {
namespace {

void scaled_add_scalar(const double* base, const double* x, double scale,
                       double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + scale * x[i];
}

void max_into_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (src[i] > dst[i]) dst[i] = src[i];
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double l1_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{scaled_add_scalar, max_into_scalar,
                                 axpy_scalar, l1_distance_scalar, sum_scalar};
  return table;
}

}  // namespace mevsim::kernels
