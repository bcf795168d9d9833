#pragma once

#include "mevsim/kernels.hpp"

namespace mevsim::kernels::detail {

#if defined(MEVSIM_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(MEVSIM_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace mevsim::kernels::detail
