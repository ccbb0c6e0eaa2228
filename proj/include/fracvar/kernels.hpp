#pragma once

#include <span>
#include <string_view>

// Inner loops over filtered increments. Every routine has a scalar
// reference; vector variants are selected once at startup from the CPU
// features and may differ from the reference only by summation order and
// fused multiply-add rounding.
namespace fracvar::kernels {

struct KernelTable {
  std::string_view name;
  /// out[j] = sum_i a[i] * x[i + j], out.size() == x.size() - a.size() + 1.
  void (*filter_apply)(std::span<const double> x, std::span<const double> a, std::span<double> out);
  /// sum_j (sum_i a[i] * x[i + j])^2 over the same range.
  double (*filter_sum_squares)(std::span<const double> x, std::span<const double> a);
  /// sum_j x[j]^2
  double (*sum_squares)(std::span<const double> x);
};

const KernelTable& scalar();
/// nullptr when the build or the running CPU lacks the instruction set.
const KernelTable* avx2();
const KernelTable* neon();

/// Best table for this CPU. FRACVAR_KERNEL=scalar in the environment forces
/// the reference implementation.
const KernelTable& active();

}  // namespace fracvar::kernels
