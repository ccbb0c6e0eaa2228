#include <arm_neon.h>

#include "fracvar/kernels.hpp"

namespace fracvar::kernels::detail {

namespace {

void filter_apply_neon(std::span<const double> x, std::span<const double> a, std::span<double> out) {
  const std::size_t n = out.size();
  const double* xp = x.data();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      const float64x2_t c = vdupq_n_f64(a[i]);
      acc0 = vfmaq_f64(acc0, c, vld1q_f64(xp + j + i));
      acc1 = vfmaq_f64(acc1, c, vld1q_f64(xp + j + i + 2));
    }
    vst1q_f64(out.data() + j, acc0);
    vst1q_f64(out.data() + j + 2, acc1);
  }
  for (; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * xp[i + j];
    out[j] = s;
  }
}

double filter_sum_squares_neon(std::span<const double> x, std::span<const double> a) {
  const std::size_t n = x.size() + 1 - a.size();
  const double* xp = x.data();
  float64x2_t tot0 = vdupq_n_f64(0.0);
  float64x2_t tot1 = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      const float64x2_t c = vdupq_n_f64(a[i]);
      acc0 = vfmaq_f64(acc0, c, vld1q_f64(xp + j + i));
      acc1 = vfmaq_f64(acc1, c, vld1q_f64(xp + j + i + 2));
    }
    tot0 = vfmaq_f64(tot0, acc0, acc0);
    tot1 = vfmaq_f64(tot1, acc1, acc1);
  }
  double total = vaddvq_f64(vaddq_f64(tot0, tot1));
  for (; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * xp[i + j];
    total += s * s;
  }
  return total;
}

double sum_squares_neon(std::span<const double> x) {
  const std::size_t n = x.size();
  const double* xp = x.data();
  float64x2_t t0 = vdupq_n_f64(0.0);
  float64x2_t t1 = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const float64x2_t v0 = vld1q_f64(xp + j);
    const float64x2_t v1 = vld1q_f64(xp + j + 2);
    t0 = vfmaq_f64(t0, v0, v0);
    t1 = vfmaq_f64(t1, v1, v1);
  }
  double total = vaddvq_f64(vaddq_f64(t0, t1));
  for (; j < n; ++j) total += xp[j] * xp[j];
  return total;
}

constexpr KernelTable kNeon{"neon", filter_apply_neon, filter_sum_squares_neon, sum_squares_neon};

}  // namespace

const KernelTable& neon_table() { return kNeon; }

}  // namespace fracvar::kernels::detail
