#pragma once

// Data-parallel inner loops shared by the auction engine and the stationary
// solver. Every kernel has a scalar reference implementation; SIMD variants
// (AVX2 on x86-64, NEON on aarch64) are selected once at runtime.
//
// The element-wise kernels are bit-identical across levels (no fused
// multiply-add anywhere). Only the reductions may differ in the last ulps
// because the lanes are summed in a different order.

#include <cstddef>
#include <span>
#include <string_view>

namespace mevsim::kernels {

enum class SimdLevel { scalar, avx2, neon };

struct KernelTable {
  // out[i] = base[i] + scale * x[i]
  void (*scaled_add)(const double* base, const double* x, double scale,
                     double* out, std::size_t n);
  // dst[i] = max(dst[i], src[i])
  void (*max_into)(double* dst, const double* src, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum |a[i] - b[i]|
  double (*l1_distance)(const double* a, const double* b, std::size_t n);
  // sum x[i]
  double (*sum)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Level in use. Chosen from MEVSIM_SIMD (scalar|avx2|neon) if set, otherwise
// the best level the CPU supports.
SimdLevel active_level();
const KernelTable& active();
// Forces a level; returns false (and changes nothing) if it is unavailable.
bool set_level(SimdLevel level);
bool level_available(SimdLevel level);
std::string_view level_name(SimdLevel level);

void scaled_add(std::span<const double> base, std::span<const double> x,
                double scale, std::span<double> out);
void max_into(std::span<double> dst, std::span<const double> src);
void axpy(double a, std::span<const double> x, std::span<double> y);
double l1_distance(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);

}  // namespace mevsim::kernels
