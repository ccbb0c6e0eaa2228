#include "fracvar/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <string>

#include "fracvar/error.hpp"
#include "fracvar/filter.hpp"
#include "fracvar/rng.hpp"

namespace fracvar {

namespace {

constexpr std::size_t kCholeskyLimit = 4096;

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_alloc(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

Eigen::MatrixXd fgn_toeplitz(std::size_t n, double h) {
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cov(i, j) = fgn_autocovariance(static_cast<long>(i) - static_cast<long>(j), h);
    }
  }
  return cov;
}

}  // namespace

void FbmSpec::validate() const {
  require_hurst(h);
  if (n_points < 2) throw DomainError("fBm path needs at least two grid points");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("mesh delta must be a positive finite number");
}

double fbm_covariance(double s, double t, double h) {
  require_hurst(h);
  if (s < 0.0 || t < 0.0) throw DomainError("fBm covariance needs nonnegative times");
  const double two_h = 2.0 * h;
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

double fgn_autocovariance(long k, double h) {
  const double two_h = 2.0 * h;
  const double x = std::abs(static_cast<double>(k));
  return 0.5 * (std::pow(x + 1.0, two_h) - 2.0 * std::pow(x, two_h) + std::pow(std::abs(x - 1.0), two_h));
}

struct FgnGenerator::Impl {
  std::size_t half = 0;  // m; the circulant has size 2m
  std::vector<double> amplitude;  // sqrt(lambda_k / 2m), k = 0..m
  fftw_plan plan = nullptr;
  Eigen::MatrixXd cholesky;  // lower factor, used only on fallback

  ~Impl() {
    if (plan != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FgnGenerator::FgnGenerator(std::size_t count, double h) : count_(count), h_(h), impl_(std::make_unique<Impl>()) {
  require_hurst(h);
  if (count == 0) throw DomainError("fGn generator needs at least one increment");

  const std::size_t m = next_pow2(count);
  const std::size_t size = 2 * m;
  impl_->half = m;

  auto row = fftw_alloc<double>(size);
  auto spectrum = fftw_alloc<fftw_complex>(m + 1);
  for (std::size_t k = 0; k <= m; ++k) row[k] = fgn_autocovariance(static_cast<long>(k), h);
  for (std::size_t k = 1; k < m; ++k) row[size - k] = row[k];

  {
    std::lock_guard lock(planner_mutex());
    fftw_plan forward = fftw_plan_dft_r2c_1d(static_cast<int>(size), row.get(), spectrum.get(), FFTW_ESTIMATE);
    fftw_execute(forward);
    fftw_destroy_plan(forward);
  }

  impl_->amplitude.resize(m + 1);
  min_eigenvalue_ = spectrum[0][0];
  bool negative = false;
  for (std::size_t k = 0; k <= m; ++k) {
    double lambda = spectrum[k][0];
    min_eigenvalue_ = std::min(min_eigenvalue_, lambda);
    if (lambda < 0.0) {
      if (lambda < -kClampTolerance) negative = true;
      lambda = 0.0;
    }
    impl_->amplitude[k] = std::sqrt(lambda / static_cast<double>(size));
  }

  if (negative) {
    if (count > kCholeskyLimit) {
      throw NumericalError("circulant embedding has eigenvalue " + std::to_string(min_eigenvalue_) +
                           " and the Cholesky fallback is limited to 4096 increments");
    }
    std::clog << "fracvar: circulant embedding not nonnegative (min eigenvalue " << min_eigenvalue_
              << "), using Cholesky factorization\n";
    Eigen::LLT<Eigen::MatrixXd> llt(fgn_toeplitz(count, h));
    if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization of fGn covariance failed");
    impl_->cholesky = llt.matrixL();
    return;
  }

  auto in = fftw_alloc<fftw_complex>(m + 1);
  auto out = fftw_alloc<double>(size);
  std::lock_guard lock(planner_mutex());
  impl_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(size), in.get(), out.get(), FFTW_ESTIMATE);
}

FgnGenerator::~FgnGenerator() = default;
FgnGenerator::FgnGenerator(FgnGenerator&&) noexcept = default;
FgnGenerator& FgnGenerator::operator=(FgnGenerator&&) noexcept = default;

bool FgnGenerator::uses_cholesky_fallback() const noexcept { return impl_->plan == nullptr; }

void FgnGenerator::sample(std::uint64_t seed, double delta, std::span<double> out) const {
  if (out.size() != count_) throw ShapeError("fGn output buffer has the wrong length");
  if (!(delta > 0.0)) throw DomainError("mesh delta must be positive");
  const double scale = std::pow(delta, h_);
  NormalSource normals(seed);

  if (uses_cholesky_fallback()) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(count_));
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normals.next();
    const Eigen::VectorXd x = impl_->cholesky * z;
    for (std::size_t i = 0; i < count_; ++i) out[i] = scale * x[static_cast<Eigen::Index>(i)];
    return;
  }

  const std::size_t m = impl_->half;
  const auto& amp = impl_->amplitude;
  auto in = fftw_alloc<fftw_complex>(m + 1);
  auto buf = fftw_alloc<double>(2 * m);

  // Hermitian half-spectrum: real endpoints, complex interior with half the
  // variance in each component.
  in[0][0] = amp[0] * normals.next();
  in[0][1] = 0.0;
  in[m][0] = amp[m] * normals.next();
  in[m][1] = 0.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 1; k < m; ++k) {
    const double a = amp[k] * inv_sqrt2;
    in[k][0] = a * normals.next();
    in[k][1] = a * normals.next();
  }
  fftw_execute_dft_c2r(impl_->plan, in.get(), buf.get());
  for (std::size_t i = 0; i < count_; ++i) out[i] = scale * buf[i];
}

std::vector<double> FgnGenerator::sample(std::uint64_t seed, double delta) const {
  std::vector<double> out(count_);
  sample(seed, delta, out);
  return out;
}

std::vector<double> sample_fgn(const FbmSpec& spec) {
  spec.validate();
  return FgnGenerator(spec.n_points - 1, spec.h).sample(spec.seed, spec.delta);
}

Path sample_fbm(const FbmSpec& spec) { return cumulate(sample_fgn(spec), spec.delta); }

Path sample_fbm_cholesky(const FbmSpec& spec) {
  spec.validate();
  if (spec.n_points > kCholeskyLimit) {
    throw DomainError("Cholesky sampler is limited to 4096 points, got " + std::to_string(spec.n_points));
  }
  const std::size_t n = spec.n_points - 1;
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cov(i, j) = fbm_covariance(static_cast<double>(i + 1) * spec.delta, static_cast<double>(j + 1) * spec.delta, spec.h);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization of the fBm covariance failed");

  NormalSource normals(spec.seed);
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normals.next();
  const Eigen::VectorXd x = llt.matrixL() * z;

  Path path{spec.delta, std::vector<double>(spec.n_points, 0.0)};
  for (std::size_t i = 0; i < n; ++i) path.values[i + 1] = x[static_cast<Eigen::Index>(i)];
  return path;
}

Path cumulate(std::span<const double> increments, double delta) {
  if (increments.empty()) throw LengthError("cumulate needs at least one increment");
  Path path{delta, std::vector<double>(increments.size() + 1)};
  path.values[0] = 0.0;
  for (std::size_t i = 0; i < increments.size(); ++i) path.values[i + 1] = path.values[i] + increments[i];
  return path;
}

std::vector<double> diff(std::span<const double> values) {
  if (values.size() < 2) throw LengthError("diff needs at least two values");
  std::vector<double> out(values.size() - 1);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) out[i] = values[i + 1] - values[i];
  return out;
}

}  // namespace fracvar
