#include <immintrin.h>

#include "fracvar/kernels.hpp"

namespace fracvar::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Eight outputs per iteration in two independent accumulators; zero
// coefficients (thinned filters) are skipped.
void filter_apply_avx2(std::span<const double> x, std::span<const double> a, std::span<double> out) {
  const std::size_t n = out.size();
  const double* xp = x.data();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      const __m256d c = _mm256_set1_pd(a[i]);
      acc0 = _mm256_fmadd_pd(c, _mm256_loadu_pd(xp + j + i), acc0);
      acc1 = _mm256_fmadd_pd(c, _mm256_loadu_pd(xp + j + i + 4), acc1);
    }
    _mm256_storeu_pd(out.data() + j, acc0);
    _mm256_storeu_pd(out.data() + j + 4, acc1);
  }
  for (; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * xp[i + j];
    out[j] = s;
  }
}

double filter_sum_squares_avx2(std::span<const double> x, std::span<const double> a) {
  const std::size_t n = x.size() + 1 - a.size();
  const double* xp = x.data();
  __m256d tot0 = _mm256_setzero_pd();
  __m256d tot1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      const __m256d c = _mm256_set1_pd(a[i]);
      acc0 = _mm256_fmadd_pd(c, _mm256_loadu_pd(xp + j + i), acc0);
      acc1 = _mm256_fmadd_pd(c, _mm256_loadu_pd(xp + j + i + 4), acc1);
    }
    tot0 = _mm256_fmadd_pd(acc0, acc0, tot0);
    tot1 = _mm256_fmadd_pd(acc1, acc1, tot1);
  }
  double total = hsum(_mm256_add_pd(tot0, tot1));
  for (; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * xp[i + j];
    total += s * s;
  }
  return total;
}

double sum_squares_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  const double* xp = x.data();
  __m256d t0 = _mm256_setzero_pd();
  __m256d t1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    const __m256d v0 = _mm256_loadu_pd(xp + j);
    const __m256d v1 = _mm256_loadu_pd(xp + j + 4);
    t0 = _mm256_fmadd_pd(v0, v0, t0);
    t1 = _mm256_fmadd_pd(v1, v1, t1);
  }
  double total = hsum(_mm256_add_pd(t0, t1));
  for (; j < n; ++j) total += xp[j] * xp[j];
  return total;
}

constexpr KernelTable kAvx2{"avx2", filter_apply_avx2, filter_sum_squares_avx2, sum_squares_avx2};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace fracvar::kernels::detail
