#include <cstdlib>
#include <string_view>

#include "bernoulli/simd/kernels.hpp"

namespace bernoulli::simd {

#if defined(BERNOULLI_HAVE_AVX2)
const Kernels& avx2_kernel_table();
#endif

const Kernels* avx2_kernels() {
#if defined(BERNOULLI_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& kernels() {
  static const Kernels& active = []() -> const Kernels& {
    const char* env = std::getenv("BERNOULLI_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const Kernels* k = avx2_kernels()) return *k;
    return scalar_kernels();
  }();
  return active;
}

}  // namespace bernoulli::simd
