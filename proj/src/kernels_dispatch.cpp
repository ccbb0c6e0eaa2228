#include <cstdlib>
#include <string_view>

#include "fracvar/kernels.hpp"

namespace fracvar::kernels {

namespace detail {
#if defined(FRACVAR_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(FRACVAR_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

const KernelTable* avx2() {
#if defined(FRACVAR_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon() {
#if defined(FRACVAR_HAVE_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return &detail::neon_table();
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("FRACVAR_KERNEL");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar();
    if (const auto* t = avx2()) return t;
    if (const auto* t = neon()) return t;
    return &scalar();
  }();
  return *chosen;
}

}  // namespace fracvar::kernels
