#include <atomic>
#include <cstdlib>
#include <string>

#include "kernel_tables.hpp"
#include "mevsim/error.hpp"

namespace mevsim::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(MEVSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* table_for(SimdLevel level) {
  switch (level) {
    case SimdLevel::scalar:
      return &scalar_kernels();
    case SimdLevel::avx2:
      return avx2_kernels();
    case SimdLevel::neon:
      return neon_kernels();
  }
  return nullptr;
}

SimdLevel detect_level() {
  if (const char* env = std::getenv("MEVSIM_SIMD")) {
    const std::string wanted(env);
    for (SimdLevel level : {SimdLevel::scalar, SimdLevel::avx2, SimdLevel::neon}) {
      if (wanted == level_name(level)) {
        if (!level_available(level)) {
          throw ConfigError("MEVSIM_SIMD=" + wanted + " is not available on this CPU");
        }
        return level;
      }
    }
    throw ConfigError("MEVSIM_SIMD=" + wanted + " unknown (scalar|avx2|neon)");
  }
  if (level_available(SimdLevel::avx2)) return SimdLevel::avx2;
  if (level_available(SimdLevel::neon)) return SimdLevel::neon;
  return SimdLevel::scalar;
}

struct Selection {
  std::atomic<SimdLevel> level;
  std::atomic<const KernelTable*> table;
  Selection() {
    const SimdLevel detected = detect_level();
    level.store(detected);
    table.store(table_for(detected));
  }
};

Selection& selection() {
  static Selection s;
  return s;
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(MEVSIM_HAVE_AVX2)
  if (cpu_has_avx2()) return &detail::avx2_table();
#endif
  return nullptr;
}

const KernelTable* neon_kernels() {
#if defined(MEVSIM_HAVE_NEON)
  return &detail::neon_table();
#else
  return nullptr;
#endif
}

bool level_available(SimdLevel level) { return table_for(level) != nullptr; }

std::string_view level_name(SimdLevel level) {
  switch (level) {
    case SimdLevel::scalar:
      return "scalar";
    case SimdLevel::avx2:
      return "avx2";
    case SimdLevel::neon:
      return "neon";
  }
  return "unknown";
}

SimdLevel active_level() { return selection().level.load(); }

const KernelTable& active() { return *selection().table.load(); }

bool set_level(SimdLevel level) {
  const KernelTable* table = table_for(level);
  if (table == nullptr) return false;
  selection().table.store(table);
  selection().level.store(level);
  return true;
}

void scaled_add(std::span<const double> base, std::span<const double> x,
                double scale, std::span<double> out) {
  active().scaled_add(base.data(), x.data(), scale, out.data(), out.size());
}

void max_into(std::span<double> dst, std::span<const double> src) {
  active().max_into(dst.data(), src.data(), dst.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), y.size());
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  return active().l1_distance(a.data(), b.data(), a.size());
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

}  // namespace mevsim::kernels
