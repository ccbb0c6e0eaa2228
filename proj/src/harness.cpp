#include "fracvar/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "fracvar/error.hpp"
#include "fracvar/rng.hpp"

namespace fracvar {

namespace {

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double median(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = xs[mid];
  if (xs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Path drop_origin(const Path& path) {
  return Path{path.delta, std::vector<double>(path.values.begin() + 1, path.values.end())};
}

}  // namespace

void parallel_for(std::size_t count, std::size_t parallelism, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(parallelism, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void StudySetting::validate() const {
  if (label.empty()) throw SettingError("study setting needs a label");
  require_hurst(h_true);
  if (!(interval_end > 0.0)) throw SettingError("interval_end must be positive");
  if (!(sigma > 0.0)) throw SettingError("sigma must be positive");
  if (n_list.empty()) throw SettingError("n_list must not be empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) throw SettingError("every n must be at least 2");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw SettingError("n_list must be strictly increasing");
  }
  if (reps < 2) throw SettingError("reps must be at least 2");
}

std::vector<StudySetting> builtin_settings() {
  const std::vector<std::size_t> ns{1000, 2000, 4000, 8000};
  const Filter d1 = filters::first_difference();
  const Filter d2 = filters::second_difference();
  auto make = [&](std::string label, double h, double end, EstimatorKind kind, const Filter& base, double sigma) {
    StudySetting s;
    s.label = std::move(label);
    s.h_true = h;
    s.interval_end = end;
    s.estimator_kind = kind;
    s.base_filter = base;
    s.sigma = sigma;
    s.drift = Drift::sine();
    s.n_list = ns;
    s.reps = 100;
    return s;
  };
  using K = EstimatorKind;
  return {
      make("Study-S1", 0.7, 1.0, K::standard, d1, 1.0),  make("Study-S2", 0.7, 1.0, K::ratio, d1, 1.0),
      make("Study-S3", 0.7, 1.0, K::ratio, d1, 5.0),     make("Study-S4", 0.7, 10.0, K::ratio, d1, 1.0),
      make("Study-S5", 0.98, 1.0, K::standard, d1, 1.0), make("Study-S6", 0.98, 1.0, K::ratio, d2, 1.0),
      make("Study-S7", 0.98, 10.0, K::ratio, d2, 1.0),
  };
}

std::optional<StudySetting> find_builtin(const std::string& label) {
  for (auto& s : builtin_settings()) {
    if (s.label == label) return s;
  }
  return std::nullopt;
}

HurstEstimate apply_estimator(const StudySetting& setting, const Path& observations) {
  switch (setting.estimator_kind) {
    case EstimatorKind::standard:
      return standard_estimator(observations);
    case EstimatorKind::ratio:
      return ratio_estimator(observations, setting.base_filter);
    case EstimatorKind::regression_h1:
      return h1_estimator(FilterFamily::thinned_pair(setting.base_filter), observations, observations.delta);
    case EstimatorKind::regression_h2:
      return h2_estimator(FilterFamily::thinned_pair(setting.base_filter), observations);
  }
  throw SettingError("unknown estimator");
}

McReport run_setting(const StudySetting& setting, const RunOptions& options) {
  setting.validate();
  const auto start = std::chrono::steady_clock::now();
  McReport report;
  report.setting = setting;
  report.oversample = options.oversample.value_or(default_oversample(setting.h_true));
  if (report.oversample == 0) throw SettingError("oversample must be at least 1");

  SdeSpec spec;
  spec.x0 = 0.0;
  spec.drift = setting.drift;
  spec.sigma = setting.sigma;
  spec.horizon = setting.interval_end;
  spec.h = setting.h_true;

  for (std::size_t n : setting.n_list) {
    const FgnGenerator generator(n * report.oversample, setting.h_true);
    std::vector<double> estimates(setting.reps, std::numeric_limits<double>::quiet_NaN());
    parallel_for(setting.reps, options.parallelism, [&](std::size_t r) {
      const std::uint64_t seed = stream_seed(setting.seed, setting.label, n, r);
      try {
        const auto traj = simulate(spec, n, report.oversample, seed, &generator);
        estimates[r] = apply_estimator(setting, drop_origin(traj.x)).value;
      } catch (const std::exception&) {
        // counted as a failure below
      }
    });

    McRow row;
    row.n = n;
    CompensatedSum err_sum;
    CompensatedSum sq_sum;
    std::vector<double> abs_errors;
    for (double est : estimates) {
      if (std::isnan(est)) {
        ++row.failures;
        continue;
      }
      const double e = est - setting.h_true;
      err_sum.add(e);
      sq_sum.add(e * e);
      abs_errors.push_back(std::abs(e));
      ++row.successes;
    }
    if (row.successes == 0) {
      throw SettingError("every replication failed for " + setting.label + " at n = " + std::to_string(n));
    }
    const double k = static_cast<double>(row.successes);
    row.bias = err_sum.value() / k;
    row.mse = sq_sum.value() / k;
    CompensatedSum dev;
    for (double est : estimates) {
      if (std::isnan(est)) continue;
      const double d = est - setting.h_true - row.bias;
      dev.add(d * d);
    }
    row.variance = row.successes > 1 ? dev.value() / (k - 1.0) : 0.0;
    row.median_abs_error = median(abs_errors);
    report.per_n.push_back(row);
    report.estimates.push_back(std::move(estimates));
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SampleMoments sample_moments(const std::vector<double>& xs) {
  SampleMoments m;
  if (xs.size() < 2) throw DomainError("moments need at least two samples");
  const double k = static_cast<double>(xs.size());
  CompensatedSum s1;
  for (double x : xs) s1.add(x);
  m.mean = s1.value() / k;
  CompensatedSum s2, s3, s4;
  for (double x : xs) {
    const double d = x - m.mean;
    const double d2 = d * d;
    s2.add(d2);
    s3.add(d2 * d);
    s4.add(d2 * d2);
  }
  const double m2 = s2.value() / k;
  m.variance = s2.value() / (k - 1.0);
  m.skewness = m2 > 0.0 ? (s3.value() / k) / std::pow(m2, 1.5) : 0.0;
  m.excess_kurtosis = m2 > 0.0 ? (s4.value() / k) / (m2 * m2) - 3.0 : 0.0;
  return m;
}

CltReport clt_study(const Filter& f, double h, double alpha, std::size_t n, std::size_t reps, std::uint64_t seed,
                    const CltOptions& options) {
  require_hurst(h);
  if (reps < 500) throw DomainError("CLT study needs at least 500 replications");
  if (n <= f.length()) throw LengthError("CLT study sample size is too small for the filter");
  const SamplingGrid grid = SamplingGrid::from_alpha(n, alpha);

  CltReport report;
  report.n = n;
  report.reps = reps;
  report.alpha = alpha;
  report.verdict = mesh_admissible(h, alpha, order(f));
  try {
    report.sigma_h = asymptotic_variance(f, h);
  } catch (const ScopeError&) {
    report.sigma_h.reset();
  }

  const std::string label = "clt:" + f.to_string() + ":" + std::to_string(h) + ":" + std::to_string(alpha);
  const double root_n = std::sqrt(static_cast<double>(n));
  report.samples.assign(reps, 0.0);

  if (options.sde_drift) {
    SdeSpec spec;
    spec.drift = *options.sde_drift;
    spec.sigma = 1.0;
    spec.horizon = static_cast<double>(n) * grid.delta;
    spec.h = h;
    const std::size_t os = default_oversample(h);
    const FgnGenerator generator(n * os, h);
    parallel_for(reps, options.parallelism, [&](std::size_t r) {
      const auto traj = simulate(spec, n, os, stream_seed(seed, label, n, r), &generator);
      report.samples[r] = root_n * v_statistic(drop_origin(traj.x), f, h);
    });
  } else {
    const FgnGenerator generator(n, h);
    parallel_for(reps, options.parallelism, [&](std::size_t r) {
      const auto inc = generator.sample(stream_seed(seed, label, n, r), grid.delta);
      report.samples[r] = root_n * v_statistic(drop_origin(cumulate(inc, grid.delta)), f, h);
    });
  }

  report.moments = sample_moments(report.samples);
  report.variance_ratio =
      report.sigma_h ? report.moments.variance / report.sigma_h->value : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace fracvar
