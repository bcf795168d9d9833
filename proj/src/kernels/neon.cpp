// Advanced SIMD variant for aarch64, where NEON is part of the base ISA.

#include <arm_neon.h>

#include <cmath>

#include "kernel_tables.hpp"

namespace mevsim::kernels {
namespace {

void scaled_add_neon(const double* base, const double* x, double scale,
                     double* out, std::size_t n) {
  const float64x2_t s = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // vmulq + vaddq rather than vfmaq to round like the scalar loop.
    const float64x2_t prod = vmulq_f64(s, vld1q_f64(x + i));
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(base + i), prod));
  }
  for (; i < n; ++i) out[i] = base[i] + scale * x[i];
}

void max_into_neon(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vld1q_f64(dst + i);
    const float64x2_t s = vld1q_f64(src + i);
    const uint64x2_t greater = vcgtq_f64(s, d);
    vst1q_f64(dst + i, vbslq_f64(greater, s, d));
  }
  for (; i < n; ++i) {
    if (src[i] > dst[i]) dst[i] = src[i];
  }
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(av, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double l1_distance_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

}  // namespace

namespace detail {
const KernelTable& neon_table() {
  static const KernelTable table{scaled_add_neon, max_into_neon, axpy_neon,
                                 l1_distance_neon, sum_neon};
  return table;
}
}  // namespace detail

}  // namespace mevsim::kernels
