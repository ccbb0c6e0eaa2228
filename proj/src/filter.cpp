#include "fracvar/filter.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "fracvar/error.hpp"
#include "fracvar/kernels.hpp"

namespace fracvar {

namespace {

constexpr double kMomentTolerance = 1e-10;

void require_mesh(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("mesh delta must be a positive finite number");
  }
}

}  // namespace

void require_hurst(double h) {
  if (!(h > 0.0 && h < 1.0)) {
    throw DomainError("Hurst index must lie in the open interval (0,1), got " + std::to_string(h));
  }
}

Filter::Filter(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) throw DomainError("filter needs at least two coefficients");
  double sum = 0.0;
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw DomainError("filter coefficients must be finite");
    sum += a;
  }
  if (std::abs(sum) > kZeroSumTolerance) {
    throw DomainError("filter coefficients must sum to zero (sum = " + std::to_string(sum) + ")");
  }
}

Filter Filter::parse(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw DomainError("empty coefficient in filter \"" + text + "\"");
    const std::string token = item.substr(first, last - first + 1);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      throw DomainError("bad coefficient \"" + token + "\" in filter \"" + text + "\"");
    }
    out.push_back(v);
  }
  return Filter(std::move(out));
}

std::string Filter::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) os << ',';
    os << coeffs_[i];
  }
  return os.str();
}

int order(const Filter& f) {
  const auto a = f.coeffs();
  // Moments up to 2p are checked; a nonzero filter of length p+1 always has
  // a nonvanishing moment of degree <= p.
  const int max_k = 2 * static_cast<int>(a.size());
  for (int k = 1; k <= max_k; ++k) {
    double moment = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double t = a[i] * std::pow(static_cast<double>(i), k);
      moment += t;
      scale = std::max(scale, std::abs(t));
    }
    if (std::abs(moment) > kMomentTolerance * std::max(1.0, scale)) return k;
  }
  throw DomainError("malformed filter: all moments vanish");
}

std::vector<double> partial_sums(const Filter& f) {
  std::vector<double> b(f.length());
  std::partial_sum(f.coeffs().begin(), f.coeffs().end(), b.begin());
  return b;
}

FilterProfile profile(const Filter& f) { return {order(f), partial_sums(f)}; }

Filter thin(const Filter& f) {
  std::vector<double> out(2 * f.span_p() + 1, 0.0);
  for (std::size_t k = 0; k < f.length(); ++k) out[2 * k] = f[k];
  return Filter(std::move(out));
}

std::vector<double> filtered_increments(std::span<const double> values, const Filter& f) {
  if (values.size() < f.length()) {
    throw LengthError("input of length " + std::to_string(values.size()) +
                      " is shorter than the filter length " + std::to_string(f.length()));
  }
  std::vector<double> out(values.size() - f.span_p());
  kernels::active().filter_apply(values, f.coeffs(), out);
  return out;
}

IncrementCovariance::IncrementCovariance(const Filter& f, double h)
    : h_(h), order_(0), span_(static_cast<long>(f.span_p())), lag0_sum_(0.0) {
  require_hurst(h);
  order_ = order(f);
  const auto a = f.coeffs();
  autocorr_.assign(a.size(), 0.0);
  for (std::size_t d = 0; d < a.size(); ++d) {
    double s = 0.0;
    for (std::size_t k = 0; k + d < a.size(); ++k) s += a[k] * a[k + d];
    autocorr_[d] = s;
  }

  // Odd moments of the symmetric autocorrelation vanish, as do the even
  // ones below 2M. With |lag| >= 16 p the ratio p/|lag| <= 1/16, so forty
  // further even terms are far below double precision.
  const double two_h = 2.0 * h;
  double binom = 1.0;
  const int last = 2 * order_ + 40;
  for (int j = 1; j <= last; ++j) {
    binom *= (two_h - (j - 1)) / j;
    if (j % 2 == 1 || j < 2 * order_) continue;
    double moment = 0.0;
    for (long d = 1; d <= span_; ++d) {
      moment += 2.0 * autocorr_[static_cast<std::size_t>(d)] * std::pow(static_cast<double>(d), j);
    }
    series_coef_.push_back(binom * moment);
    series_pow_.push_back(j);
  }
  lag0_sum_ = lag_sum(0);
}

double IncrementCovariance::lag_sum(long lag) const {
  const double two_h = 2.0 * h_;
  const long r = std::labs(lag);
  if (span_ > 0 && r >= 16 * span_) {
    const double rr = static_cast<double>(r);
    const double inv = 1.0 / rr;
    double sum = 0.0;
    for (std::size_t i = 0; i < series_coef_.size(); ++i) {
      sum += series_coef_[i] * std::pow(inv, series_pow_[i]);
    }
    return std::pow(rr, two_h) * sum;
  }
  double s = 0.0;
  for (long d = -span_; d <= span_; ++d) {
    const long x = std::labs(r + d);
    if (x == 0) continue;  // 0^{2H} = 0
    s += autocorr_[static_cast<std::size_t>(std::labs(d))] * std::pow(static_cast<double>(x), two_h);
  }
  return s;
}

double IncrementCovariance::covariance(double delta, long lag) const {
  require_mesh(delta);
  return -0.5 * std::pow(delta, 2.0 * h_) * lag_sum(lag);
}

double IncrementCovariance::correlation(long lag) const {
  if (lag == 0) return 1.0;
  return lag_sum(lag) / lag0_sum_;
}

double filter_covariance(const Filter& f, double delta, double h, long lag) {
  require_mesh(delta);
  return IncrementCovariance(f, h).covariance(delta, lag);
}

double filter_variance(const Filter& f, double delta, double h) {
  return filter_covariance(f, delta, h, 0);
}

namespace filters {
Filter first_difference() { return Filter({-1.0, 1.0}); }
Filter second_difference() { return Filter({1.0, -2.0, 1.0}); }
}  // namespace filters

}  // namespace fracvar
