#include <cstdlib>
#include <cstring>

#include "gmclab/simd.hpp"

namespace gmclab::simd {

#if defined(GMCLAB_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(GMCLAB_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &avx2_table();
#endif
  return nullptr;
}

const KernelTable& kernels() {
  static const KernelTable* chosen = [] {
    const char* forced = std::getenv("GMCLAB_SIMD");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar_kernels();
    const KernelTable* fast = avx2_kernels();
    return fast != nullptr ? fast : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace gmclab::simd
