#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracvar/fbm.hpp"
#include "fracvar/filter.hpp"

namespace fracvar {

/// n observations at mesh delta, optionally tied by delta = n^{-alpha}.
struct SamplingGrid {
  std::size_t n = 0;
  double delta = 1.0;
  std::optional<double> alpha;

  static SamplingGrid from_alpha(std::size_t n, double alpha);
  void validate() const;
};

struct VariationReport {
  double u = 0.0;
  double v = 0.0;
  std::size_t n_terms = 0;  // n - p
};

/// (1/n) sum_j (Delta_a Z_j)^2 with n the number of values.
double u_statistic(std::span<const double> values, const Filter& f);
double u_statistic(const Path& path, const Filter& f);

/// (1/n) sum_j ((Delta_a Z_j)^2 / sigma_{a,delta} - 1), sigma taken at the
/// reference index h and the path mesh.
double v_statistic(const Path& path, const Filter& f, double h);

VariationReport variation_report(const Path& path, const Filter& f, double h);

/// Correlation of fBm increments over f, `lag` steps apart (mesh-free).
double rho(const Filter& f, double h, long lag);

struct AsymptoticVariance {
  double value = 0.0;          // 2 (1 + 2 sum_{r=1..R} rho(r)^2)
  double tail_estimate = 0.0;  // omitted contribution of lags beyond R
  long truncation = 0;
};

/// Limit variance of sqrt(n) V. Needs M(a) > h + 1/4; throws ScopeError otherwise.
AsymptoticVariance asymptotic_variance(const Filter& f, double h, long truncation = 1'000'000);

struct MeshConstraint {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

struct MeshVerdict {
  bool clt_applies = false;
  std::vector<MeshConstraint> constraints;
};

/// Whether sqrt(n) V(a, n, n^{-alpha}, X) is covered by the SDE central limit
/// theorems: for h < 1/2 alpha > 1/(2(1-h)); for h >= 1/2 alpha >= 1,
/// alpha > max((2h-1)/(2-2h), 1/(4-4h)) and M(a) > h + 1/4.
MeshVerdict mesh_admissible(double h, double alpha, int m_order);

}  // namespace fracvar
