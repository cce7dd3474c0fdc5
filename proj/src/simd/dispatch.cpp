#include <cstdlib>
#include <cstring>

#include "ihoc/simd/kernels.hpp"

namespace ihoc::simd {

#if defined(IHOC_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(IHOC_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  static const bool usable = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return usable ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("IHOC_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const KernelTable* wide = avx2_kernels();
    return wide != nullptr ? wide : &scalar_kernels();
  }();
  return *chosen;
}

const char* isa_name() { return kernels().name; }

}  // namespace ihoc::simd
