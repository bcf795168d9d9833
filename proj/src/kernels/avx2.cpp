// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "kernel_tables.hpp"

namespace mevsim::kernels {
namespace {

void scaled_add_avx2(const double* base, const double* x, double scale,
                     double* out, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d b = _mm256_loadu_pd(base + i);
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(b, _mm256_mul_pd(s, v)));
  }
  for (; i < n; ++i) out[i] = base[i] + scale * x[i];
}

void max_into_avx2(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_loadu_pd(dst + i);
    const __m256d s = _mm256_loadu_pd(src + i);
    // (s > d) ? s : d, same as the scalar loop.
    _mm256_storeu_pd(dst + i, _mm256_max_pd(s, d));
  }
  for (; i < n; ++i) {
    if (src[i] > dst[i]) dst[i] = src[i];
  }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yv = _mm256_loadu_pd(y + i);
    const __m256d xv = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double l1_distance_avx2(const double* a, const double* b, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

}  // namespace

namespace detail {
const KernelTable& avx2_table() {
  static const KernelTable table{scaled_add_avx2, max_into_avx2, axpy_avx2,
                                 l1_distance_avx2, sum_avx2};
  return table;
}
}  // namespace detail

}  // namespace mevsim::kernels
