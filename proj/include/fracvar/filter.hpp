#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fracvar {

/// Zero-sum coefficient vector (a_0, ..., a_p), p >= 1.
///
/// Coefficients are stored exactly as given. Construction rejects vectors
/// shorter than two entries and vectors whose sum exceeds 1e-12 in
/// magnitude.
class Filter {
 public:
  static constexpr double kZeroSumTolerance = 1e-12;

  explicit Filter(std::vector<double> coeffs);

  /// Parses "c0,c1,...,cp". Whitespace around entries is ignored.
  static Filter parse(const std::string& text);

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  /// Number of coefficients, p + 1.
  std::size_t length() const noexcept { return coeffs_.size(); }
  /// Largest index p.
  std::size_t span_p() const noexcept { return coeffs_.size() - 1; }

  std::string to_string() const;

  friend bool operator==(const Filter&, const Filter&) = default;

 private:
  std::vector<double> coeffs_;
};

struct FilterProfile {
  int order = 0;
  std::vector<double> partial_sums;
};

/// Smallest M >= 1 with sum_i a_i i^M != 0 (moments below M vanish to 1e-10).
int order(const Filter& f);

/// b_i = a_0 + ... + a_i; the last entry is 0 for a zero-sum filter.
std::vector<double> partial_sums(const Filter& f);

FilterProfile profile(const Filter& f);

/// Dilated filter of length 2p + 1: a2[2k] = a[k], odd entries 0.
Filter thin(const Filter& f);

/// (sum_i a_i x[i + j])_j for j = 0 .. n - p - 1.
std::vector<double> filtered_increments(std::span<const double> values, const Filter& f);

/// Covariance of two fBm increments over f at mesh delta, `lag` grid steps apart.
double filter_covariance(const Filter& f, double delta, double h, long lag);

/// Variance of a single fBm increment over f at mesh delta.
double filter_variance(const Filter& f, double delta, double h);

/// Second-order structure of fBm increments over one filter at a fixed H.
///
/// Precomputes the filter autocorrelation so that lag sums can be evaluated
/// repeatedly. Lags far beyond the filter span use a binomial expansion
/// whose leading power is |lag|^{2H - 2M(a)}, avoiding the cancellation of
/// the direct double sum.
class IncrementCovariance {
 public:
  IncrementCovariance(const Filter& f, double h);

  double h() const noexcept { return h_; }
  int filter_order() const noexcept { return order_; }

  /// sum_{k,l} a_k a_l |lag + k - l|^{2H}
  double lag_sum(long lag) const;
  double covariance(double delta, long lag) const;
  double variance(double delta) const { return covariance(delta, 0); }
  /// Mesh-free correlation covariance(lag) / variance.
  double correlation(long lag) const;

 private:
  double h_;
  int order_;
  long span_;
  std::vector<double> autocorr_;     // c_d, d = 0..p
  std::vector<double> series_coef_;  // C(2H, j) * m_j for even j >= 2M
  std::vector<int> series_pow_;
  double lag0_sum_;
};

/// Canonical filters used throughout the studies.
namespace filters {
Filter first_difference();   // (-1, 1)
Filter second_difference();  // (1, -2, 1)
}  // namespace filters

void require_hurst(double h);

}  // namespace fracvar
