#include "fracvar/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "fracvar/error.hpp"
#include "fracvar/variation.hpp"

namespace fracvar {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::standard:
      return "standard";
    case EstimatorKind::ratio:
      return "ratio";
    case EstimatorKind::regression_h1:
      return "regression_h1";
    case EstimatorKind::regression_h2:
      return "regression_h2";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view text) {
  if (text == "standard") return EstimatorKind::standard;
  if (text == "ratio") return EstimatorKind::ratio;
  if (text == "regression_h1" || text == "h1") return EstimatorKind::regression_h1;
  if (text == "regression_h2" || text == "h2") return EstimatorKind::regression_h2;
  throw DomainError("unknown estimator \"" + std::string(text) +
                    "\" (expected standard, ratio, regression_h1, regression_h2)");
}

FilterFamily::FilterFamily(std::vector<Filter> filters) : filters_(std::move(filters)) {
  if (filters_.empty()) throw DesignError("filter family must contain at least one filter");
  for (const auto& f : filters_) p_max_ = std::max(p_max_, f.span_p());
}

FilterFamily FilterFamily::thinned_pair(const Filter& base) { return FilterFamily({base, thin(base)}); }

RegressionDesign build_design_matrix(const FilterFamily& family) {
  const auto m = static_cast<Eigen::Index>(family.size());
  const auto p_max = static_cast<Eigen::Index>(family.p_max());
  RegressionDesign design{Eigen::MatrixXd::Zero(m, p_max), 0};
  for (Eigen::Index i = 0; i < m; ++i) {
    const Filter& f = family.filters()[static_cast<std::size_t>(i)];
    const std::size_t p = f.span_p();
    for (std::size_t j = 1; j <= p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k + j <= p; ++k) s += f[k] * f[k + j];
      design.a_matrix(i, static_cast<Eigen::Index>(j) - 1) = -s;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design.a_matrix);
  svd.setThreshold(kRankTolerance);
  design.rank = svd.rank();
  return design;
}

namespace {

void finish(HurstEstimate& est) {
  if (!std::isfinite(est.value)) throw DegenerateDataError("estimate is not finite");
  if (!(est.value > 0.0 && est.value < 1.0)) {
    est.diagnostics.warnings.push_back("estimate " + std::to_string(est.value) + " lies outside (0,1)");
  }
}

double positive_u(const Path& path, const Filter& f) {
  const double u = u_statistic(path, f);
  if (!(u > 0.0)) throw DegenerateDataError("degenerate data: variation over filter (" + f.to_string() + ") is zero");
  return u;
}

// log|D_d|, recording a warning for negative components.
std::vector<double> log_abs(std::span<const double> d_hat, std::vector<std::string>& warnings) {
  std::vector<double> out(d_hat.size());
  for (std::size_t d = 0; d < d_hat.size(); ++d) {
    if (d_hat[d] == 0.0 || !std::isfinite(d_hat[d])) {
      throw DegenerateDataError("degenerate data: D-hat component " + std::to_string(d + 1) + " is zero");
    }
    if (d_hat[d] < 0.0) {
      warnings.push_back("D-hat component " + std::to_string(d + 1) + " is negative; using its absolute value");
    }
    out[d] = std::log(std::abs(d_hat[d]));
  }
  return out;
}

std::vector<double> family_u(const FilterFamily& family, const Path& path) {
  std::vector<double> u;
  u.reserve(family.size());
  for (const auto& f : family.filters()) u.push_back(u_statistic(path, f));
  return u;
}

}  // namespace

HurstEstimate standard_estimator(const Path& path) {
  if (path.size() < 3) throw LengthError("standard estimator needs at least three observations");
  const Filter a = filters::first_difference();
  const double u = positive_u(path, a);
  const double n = static_cast<double>(path.size());
  HurstEstimate est;
  est.kind = EstimatorKind::standard;
  est.value = std::log(n * u) / (-2.0 * std::log(n)) + 0.5;
  est.diagnostics.u_values = {u};
  finish(est);
  return est;
}

HurstEstimate ratio_estimator(const Path& path, const Filter& base) {
  const Filter thinned = thin(base);
  if (path.size() <= thinned.length()) {
    throw LengthError("path too short for the thinned filter (" + thinned.to_string() + ")");
  }
  const double u1 = positive_u(path, base);
  const double u2 = positive_u(path, thinned);
  HurstEstimate est;
  est.kind = EstimatorKind::ratio;
  est.value = 0.5 * std::log2(u2 / u1);
  est.diagnostics.u_values = {u1, u2};
  finish(est);
  return est;
}

std::vector<double> solve_design(const RegressionDesign& design, std::span<const double> u_values) {
  const auto& a = design.a_matrix;
  if (static_cast<Eigen::Index>(u_values.size()) != a.rows()) {
    throw ShapeError("expected " + std::to_string(a.rows()) + " variation values, got " + std::to_string(u_values.size()));
  }
  if (!design.full_rank()) {
    throw DesignError("filter family design matrix has rank " + std::to_string(design.rank) + " < P = " +
                      std::to_string(a.cols()) + "; choose filters giving a full-rank design");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTolerance);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(u_values.data(), a.rows());
  const Eigen::VectorXd d = svd.solve(rhs);
  return {d.data(), d.data() + d.size()};
}

std::vector<double> estimate_d(const FilterFamily& family, const Path& path) {
  return solve_design(build_design_matrix(family), family_u(family, path));
}

HurstEstimate h1_from_d(std::span<const double> d_hat, double delta) {
  if (!(delta > 0.0)) throw DomainError("mesh delta must be positive");
  HurstEstimate est;
  est.kind = EstimatorKind::regression_h1;
  const auto logs = log_abs(d_hat, est.diagnostics.warnings);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double x = std::log(static_cast<double>(i + 1) * delta);
    num += logs[i] * x;
    den += x * x;
  }
  if (den == 0.0) throw DesignError("regression through the origin is singular: all log(d * delta) vanish");
  est.value = num / (2.0 * den);
  est.diagnostics.d_hat = std::vector<double>(d_hat.begin(), d_hat.end());
  finish(est);
  return est;
}

HurstEstimate h2_from_d(std::span<const double> d_hat) {
  const std::size_t p = d_hat.size();
  if (p < 2) throw DesignError("regression with intercept needs P >= 2 lags");
  HurstEstimate est;
  est.kind = EstimatorKind::regression_h2;
  const auto logs = log_abs(d_hat, est.diagnostics.warnings);
  double sum_xy = 0.0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_xx = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const double x = std::log(static_cast<double>(i + 1));
    sum_xy += logs[i] * x;
    sum_x += x;
    sum_y += logs[i];
    sum_xx += x * x;
  }
  const double inv_p = 1.0 / static_cast<double>(p);
  est.value = (sum_xy - inv_p * sum_y * sum_x) / (2.0 * (sum_xx - inv_p * sum_x * sum_x));
  est.diagnostics.d_hat = std::vector<double>(d_hat.begin(), d_hat.end());
  finish(est);
  return est;
}

HurstEstimate h1_estimator(const FilterFamily& family, const Path& path, double delta) {
  const auto u = family_u(family, path);
  auto est = h1_from_d(solve_design(build_design_matrix(family), u), delta);
  est.diagnostics.u_values = u;
  return est;
}

HurstEstimate h2_estimator(const FilterFamily& family, const Path& path) {
  const auto u = family_u(family, path);
  auto est = h2_from_d(solve_design(build_design_matrix(family), u));
  est.diagnostics.u_values = u;
  return est;
}

}  // namespace fracvar
