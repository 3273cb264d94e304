#include <cstdlib>
#include <string_view>

#include "vlcsim/simd/kernels.hpp"

namespace vlcsim::simd {

namespace detail {
#if defined(VLCSIM_HAVE_AVX2)
const Kernels& avx2_table();
#endif
#if defined(__aarch64__)
const Kernels& neon_table();
#endif
}  // namespace detail

const Kernels* avx2_kernels() {
#if defined(VLCSIM_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels* neon_kernels() {
#if defined(__aarch64__)
  return &detail::neon_table();
#else
  return nullptr;
#endif
}

const Kernels& active_kernels() {
  static const Kernels* chosen = [] {
    const char* env = std::getenv("VLCSIM_SIMD");
    const std::string_view want = env != nullptr ? env : "";
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels() != nullptr) return avx2_kernels();
    if (want == "neon" && neon_kernels() != nullptr) return neon_kernels();
    if (const Kernels* k = avx2_kernels()) return k;
    if (const Kernels* k = neon_kernels()) return k;
    return &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace vlcsim::simd
