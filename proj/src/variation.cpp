#include "fracvar/variation.hpp"

#include <algorithm>
#include <cmath>

#include "fracvar/error.hpp"
#include "fracvar/kernels.hpp"

namespace fracvar {

SamplingGrid SamplingGrid::from_alpha(std::size_t n, double alpha) {
  SamplingGrid g{n, std::pow(static_cast<double>(n), -alpha), alpha};
  g.validate();
  return g;
}

void SamplingGrid::validate() const {
  if (n == 0) throw DomainError("sampling grid needs at least one observation");
  if (!(delta > 0.0)) throw DomainError("mesh delta must be positive");
  if (alpha) {
    if (!(*alpha > 0.0)) throw DomainError("mesh exponent alpha must be positive");
    const double expected = std::pow(static_cast<double>(n), -*alpha);
    if (std::abs(delta - expected) > 1e-12 * delta) throw DomainError("delta does not equal n^{-alpha}");
  }
}

namespace {

double filtered_square_sum(std::span<const double> values, const Filter& f) {
  if (values.size() <= f.length()) {
    throw LengthError("path of " + std::to_string(values.size()) + " values is too short for a filter of length " +
                      std::to_string(f.length()));
  }
  return kernels::active().filter_sum_squares(values, f.coeffs());
}

}  // namespace

double u_statistic(std::span<const double> values, const Filter& f) {
  return filtered_square_sum(values, f) / static_cast<double>(values.size());
}

double u_statistic(const Path& path, const Filter& f) { return u_statistic(path.values, f); }

VariationReport variation_report(const Path& path, const Filter& f, double h) {
  const double sigma = filter_variance(f, path.delta, h);
  const double n = static_cast<double>(path.size());
  const double squares = filtered_square_sum(path.values, f);
  VariationReport r;
  r.n_terms = path.size() - f.span_p();
  r.u = squares / n;
  r.v = (squares / sigma - static_cast<double>(r.n_terms)) / n;
  return r;
}

double v_statistic(const Path& path, const Filter& f, double h) { return variation_report(path, f, h).v; }

double rho(const Filter& f, double h, long lag) { return IncrementCovariance(f, h).correlation(lag); }

AsymptoticVariance asymptotic_variance(const Filter& f, double h, long truncation) {
  require_hurst(h);
  if (truncation < 1) throw DomainError("truncation must be a positive number of lags");
  const IncrementCovariance cov(f, h);
  const int m = cov.filter_order();
  if (!(m > h + 0.25)) {
    throw ScopeError("asymptotic variance needs filter order M(a) > H + 1/4 (got M = " + std::to_string(m) +
                     ", H = " + std::to_string(h) + ")");
  }
  // Ascending lags; the terms shrink, so this order loses the least.
  double sum = 0.0;
  double last = 0.0;
  for (long r = 1; r <= truncation; ++r) {
    last = cov.correlation(r);
    sum += last * last;
  }
  // rho(r)^2 ~ C r^{-gamma} with gamma = 4M - 4H > 1.
  const double gamma = 4.0 * m - 4.0 * h;
  const double tail = last * last * static_cast<double>(truncation) / (gamma - 1.0);
  return {2.0 * (1.0 + 2.0 * sum), 4.0 * tail, truncation};
}

MeshVerdict mesh_admissible(double h, double alpha, int m_order) {
  require_hurst(h);
  MeshVerdict verdict;
  auto add = [&](std::string name, double lhs, double rhs, bool ok) {
    verdict.constraints.push_back({std::move(name), lhs, rhs, ok});
  };
  if (h < 0.5) {
    const double bound = 1.0 / (2.0 * (1.0 - h));
    add("alpha > 1/(2(1-H))", alpha, bound, alpha > bound);
  } else {
    add("alpha >= 1", alpha, 1.0, alpha >= 1.0);
    const double b1 = (2.0 * h - 1.0) / (2.0 - 2.0 * h);
    add("alpha > (2H-1)/(2-2H)", alpha, b1, alpha > b1);
    const double b2 = 1.0 / (4.0 - 4.0 * h);
    add("alpha > 1/(4-4H)", alpha, b2, alpha > b2);
    add("M(a) > H + 1/4", m_order, h + 0.25, m_order > h + 0.25);
  }
  verdict.clt_applies = std::all_of(verdict.constraints.begin(), verdict.constraints.end(),
                                    [](const MeshConstraint& c) { return c.satisfied; });
  return verdict;
}

}  // namespace fracvar
