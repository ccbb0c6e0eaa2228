#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracvar/fbm.hpp"
#include "fracvar/filter.hpp"

namespace fracvar {

enum class EstimatorKind { standard, ratio, regression_h1, regression_h2 };

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view text);

/// Filters a^(1) .. a^(m) whose variations are regressed jointly.
class FilterFamily {
 public:
  explicit FilterFamily(std::vector<Filter> filters);

  /// {base, thin(base)}.
  static FilterFamily thinned_pair(const Filter& base);

  const std::vector<Filter>& filters() const noexcept { return filters_; }
  std::size_t size() const noexcept { return filters_.size(); }
  /// P = max_i p_i.
  std::size_t p_max() const noexcept { return p_max_; }

 private:
  std::vector<Filter> filters_;
  std::size_t p_max_ = 0;
};

/// m x P matrix with A_ij = -sum_{k=0}^{p_i - j} a^(i)_k a^(i)_{k+j} (zero for j > p_i).
/// A (delta d)^{2H} over d = 1..P gives the increment variances of the family.
struct RegressionDesign {
  Eigen::MatrixXd a_matrix;
  Eigen::Index rank = 0;

  bool full_rank() const noexcept { return rank == a_matrix.cols(); }
};

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-10;

RegressionDesign build_design_matrix(const FilterFamily& family);

struct EstimateDiagnostics {
  std::vector<double> u_values;
  std::optional<std::vector<double>> d_hat;
  std::vector<std::string> warnings;
};

struct HurstEstimate {
  double value = 0.0;
  EstimatorKind kind = EstimatorKind::standard;
  EstimateDiagnostics diagnostics;
};

/// log(n U) / (-2 log n) + 1/2 with a = (-1, 1), assuming delta = 1/n.
HurstEstimate standard_estimator(const Path& path);

/// (1/2) log2(U(thin(base)) / U(base)). Reads no mesh.
HurstEstimate ratio_estimator(const Path& path, const Filter& base);

/// Least-squares D-hat solving A D = u through an SVD; rank-deficient designs
/// raise DesignError.
std::vector<double> solve_design(const RegressionDesign& design, std::span<const double> u_values);

/// D-hat for a path: regression of the family's U statistics on A.
std::vector<double> estimate_d(const FilterFamily& family, const Path& path);

/// Regression through the origin of log|D_d| on log(d delta), halved.
/// Returns the estimate with any warnings.
HurstEstimate h1_from_d(std::span<const double> d_hat, double delta);
/// Centered regression of log|D_d| on log d, halved; invariant to delta.
HurstEstimate h2_from_d(std::span<const double> d_hat);

HurstEstimate h1_estimator(const FilterFamily& family, const Path& path, double delta);
HurstEstimate h2_estimator(const FilterFamily& family, const Path& path);

}  // namespace fracvar
