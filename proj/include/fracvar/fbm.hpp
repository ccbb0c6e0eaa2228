#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fracvar {

/// Values of a process on the uniform grid t_j = j * delta, j = 0, 1, ...
struct Path {
  double delta = 1.0;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double time(std::size_t j) const noexcept { return static_cast<double>(j) * delta; }
};

struct FbmSpec {
  double h = 0.5;
  std::size_t n_points = 2;
  double delta = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// E[B_s B_t] = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(double s, double t, double h);

/// Autocovariance of unit-mesh fractional Gaussian noise at integer lag k.
double fgn_autocovariance(long k, double h);

/// Exact sampler of fractional Gaussian noise by circulant embedding.
///
/// The embedding eigenvalues depend only on (count, H) and are computed
/// once; sample() may then be called concurrently from several threads.
/// Eigenvalues in [-1e-9, 0) are clamped to zero. A more negative
/// eigenvalue switches the generator to a Cholesky factor of the Toeplitz
/// covariance (count <= 4096) or raises NumericalError.
class FgnGenerator {
 public:
  static constexpr double kClampTolerance = 1e-9;

  FgnGenerator(std::size_t count, double h);
  ~FgnGenerator();
  FgnGenerator(FgnGenerator&&) noexcept;
  FgnGenerator& operator=(FgnGenerator&&) noexcept;

  std::size_t count() const noexcept { return count_; }
  double h() const noexcept { return h_; }
  bool uses_cholesky_fallback() const noexcept;
  /// Smallest raw embedding eigenvalue, before clamping.
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  /// Writes `count` increments at mesh delta (unit-mesh noise scaled by delta^H).
  void sample(std::uint64_t seed, double delta, std::span<double> out) const;
  std::vector<double> sample(std::uint64_t seed, double delta = 1.0) const;

 private:
  struct Impl;
  std::size_t count_;
  double h_;
  double min_eigenvalue_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

/// n_points - 1 fGn increments at mesh spec.delta.
std::vector<double> sample_fgn(const FbmSpec& spec);

/// fBm path through cumulated circulant-embedding increments.
Path sample_fbm(const FbmSpec& spec);

/// fBm path from a Cholesky factor of the full covariance matrix (n_points <= 4096).
Path sample_fbm_cholesky(const FbmSpec& spec);

/// Prefix sums with a leading zero.
Path cumulate(std::span<const double> increments, double delta = 1.0);

/// Successive differences; inverse of cumulate for paths starting at zero.
std::vector<double> diff(std::span<const double> values);

}  // namespace fracvar
