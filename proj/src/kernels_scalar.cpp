#include "fracvar/kernels.hpp"

namespace fracvar::kernels {

namespace {

void filter_apply_scalar(std::span<const double> x, std::span<const double> a, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i + j];
    out[j] = s;
  }
}

double filter_sum_squares_scalar(std::span<const double> x, std::span<const double> a) {
  const std::size_t n = x.size() + 1 - a.size();
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i + j];
    total += s * s;
  }
  return total;
}

double sum_squares_scalar(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += v * v;
  return total;
}

constexpr KernelTable kScalar{"scalar", filter_apply_scalar, filter_sum_squares_scalar, sum_squares_scalar};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace fracvar::kernels
