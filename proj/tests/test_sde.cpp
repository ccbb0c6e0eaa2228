#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "doctest.h"
#include "fracvar/error.hpp"
#include "fracvar/filter.hpp"
#include "fracvar/sde.hpp"

using namespace fracvar;

namespace {

SdeSpec make_spec(Drift drift, double h, double sigma = 1.0, double x0 = 0.0, double horizon = 1.0) {
  SdeSpec s;
  s.x0 = x0;
  s.drift = std::move(drift);
  s.sigma = sigma;
  s.horizon = horizon;
  s.h = h;
  return s;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Path subsample(const Path& fine, std::size_t every) {
  Path out{fine.delta * static_cast<double>(every), {}};
  for (std::size_t i = 0; i < fine.size(); i += every) out.values.push_back(fine.values[i]);
  return out;
}

}  // namespace

TEST_CASE("drift registry bounds") {
  CHECK_NOTHROW(Drift::sine());
  CHECK_THROWS_AS(Drift::sine(1.5), DomainError);
  CHECK_THROWS_AS(Drift::constant(3.0, 2.0), DomainError);
  CHECK_NOTHROW(Drift::constant(-3.0, 3.0));
  CHECK_THROWS_AS(Drift::scaled_tanh(2.0, 2.5), DomainError);
  CHECK_NOTHROW(Drift::scaled_tanh(2.0, 3.0));
  CHECK_THROWS_AS(Drift::zero(0.0), DomainError);
  CHECK(Drift::parse("sine").kind() == DriftKind::sine);
  CHECK(Drift::parse("constant:0.5").param() == 0.5);
  CHECK(Drift::parse("tanh:2").bound_m() == 3.0);
  CHECK_THROWS_AS(Drift::parse("linear:1"), DomainError);
  CHECK(Drift::sine()(0.5, 1.0) == std::sin(1.5));
}

TEST_CASE("zero drift returns the driving fBm exactly") {
  const auto spec = make_spec(Drift::zero(), 0.7);
  const auto traj = simulate(spec, 200, 4, 17);
  REQUIRE(traj.x.size() == 201);
  CHECK(traj.x.delta == doctest::Approx(1.0 / 200));
  CHECK(std::memcmp(traj.x.values.data(), traj.fbm.values.data(), traj.x.size() * sizeof(double)) == 0);
  const auto y = drift_component(traj.x, traj.fbm, spec);
  for (double v : y.values) CHECK(v == 0.0);
}

TEST_CASE("noise scale enters multiplicatively under zero drift") {
  const auto one = simulate(make_spec(Drift::zero(), 0.3), 100, 1, 5);
  const auto five = simulate(make_spec(Drift::zero(), 0.3, 5.0), 100, 1, 5);
  for (std::size_t i = 0; i < one.x.size(); ++i) CHECK(five.x.values[i] == 5.0 * one.x.values[i]);
}

TEST_CASE("constant drift adds c t") {
  const double c = 0.75;
  const auto spec = make_spec(Drift::constant(c), 0.6, 1.0, 2.0);
  const auto traj = simulate(spec, 500, 8, 3);
  const auto y = drift_component(traj.x, traj.fbm, spec);
  for (std::size_t j = 0; j < traj.x.size(); ++j) {
    const double t = traj.x.time(j);
    CHECK(std::abs(traj.x.values[j] - (2.0 + c * t + traj.fbm.values[j])) <= 1e-12);
    CHECK(std::abs(y.values[j] - c * t) <= 1e-12);
  }
}

TEST_CASE("drift increments are bounded by M delta") {
  const std::vector<Drift> drifts{Drift::zero(), Drift::constant(0.4, 0.4), Drift::sine(), Drift::scaled_tanh(1.5)};
  const std::vector<Filter> corpus{Filter({-1, 1}), Filter({-1, 0, 1}), Filter({1, -2, 1}), Filter({1, 0, -2, 0, 1}),
                                   Filter({1, -3, 3, -1})};
  for (const auto& d : drifts) {
    for (double h : {0.3, 0.8}) {
      const auto spec = make_spec(d, h, 1.0, 0.2, 3.0);
      const auto traj = simulate(spec, 400, 4, 21);
      const auto y = drift_component(traj.x, traj.fbm, spec);
      const double m_delta = d.bound_m() * y.delta;
      // Rounding slack: X is stored to double precision before Y is recovered.
      const double slack = 1e-12;
      for (std::size_t j = 0; j + 1 < y.size(); ++j) {
        CHECK(std::abs(y.values[j + 1] - y.values[j]) <= m_delta + slack);
      }
      for (const auto& f : corpus) {
        double bsum = 0.0;
        for (double b : partial_sums(f)) bsum += std::abs(b);
        for (double inc : filtered_increments(y.values, f)) CHECK(std::abs(inc) <= bsum * m_delta + slack);
      }
    }
  }
}

TEST_CASE("Euler converges linearly in the fine step for sine drift") {
  // Same fBm on the finest grid, integrated with oversample 1..16 against 64.
  const std::size_t n_obs = 100;
  const auto spec = make_spec(Drift::sine(), 0.7);
  std::vector<double> mean_err(5, 0.0);
  const std::vector<std::size_t> steps{1, 2, 4, 8, 16};
  const int seeds = 6;
  for (int s = 0; s < seeds; ++s) {
    const std::size_t finest = 64;
    const Path fine = cumulate(FgnGenerator(n_obs * finest, 0.7).sample(700 + s, 1.0 / (n_obs * finest)),
                               1.0 / (n_obs * finest));
    const auto ref = integrate(spec, fine, finest);
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto coarse = integrate(spec, subsample(fine, finest / steps[i]), steps[i]);
      CHECK(coarse.fbm.values == ref.fbm.values);
      mean_err[i] += sup_diff(coarse.x.values, ref.x.values) / seeds;
    }
  }
  // err(k) ~ C (1/k - 1/64) for a first-order scheme: fit the log-log slope.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CHECK(mean_err[i] > 0.0);
    if (i > 0) CHECK(mean_err[i] < mean_err[i - 1]);
    const double x = std::log(1.0 / static_cast<double>(steps[i]) - 1.0 / 64.0);
    const double y = std::log(mean_err[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double k = static_cast<double>(steps.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  MESSAGE("self-convergence slope " << slope);
  CHECK(slope > 0.8);
  CHECK(slope < 1.2);
  CHECK(mean_err[0] <= 2.0 / static_cast<double>(n_obs));
}

TEST_CASE("simulation is deterministic") {
  const auto spec = make_spec(Drift::sine(), 0.98, 1.0, 0.0, 10.0);
  const auto a = simulate_euler(spec, 300, 8, 4);
  const auto b = simulate_euler(spec, 300, 8, 4);
  CHECK(a.values == b.values);
  CHECK(a.size() == 301);
  CHECK(a.delta == doctest::Approx(10.0 / 300));
}

TEST_CASE("errors") {
  const auto bad = Drift::custom("nan", [](double, double) { return std::numeric_limits<double>::quiet_NaN(); }, 0, 0, 1);
  CHECK_THROWS_AS(simulate_euler(make_spec(bad, 0.5), 10, 1, 0), NumericalError);
  CHECK_THROWS_AS(simulate_euler(make_spec(Drift::sine(), 0.5, -1.0), 10, 1, 0), DomainError);
  CHECK_THROWS_AS(simulate_euler(make_spec(Drift::sine(), 0.5), 1, 1, 0), DomainError);
  CHECK_THROWS_AS(simulate_euler(make_spec(Drift::sine(), 0.5), 10, 0, 0), DomainError);
  const auto spec = make_spec(Drift::zero(), 0.5);
  const auto t1 = simulate(spec, 10, 1, 0);
  const auto t2 = simulate(spec, 11, 1, 0);
  CHECK_THROWS_AS(drift_component(t1.x, t2.fbm, spec), ShapeError);
  const auto custom = Drift::custom("half", [](double, double x) { return 0.5 * std::sin(x); }, 0.5, 0.5, 1.0);
  CHECK(custom.name() == "half");
  CHECK_NOTHROW(simulate_euler(make_spec(custom, 0.5), 10, 2, 0));
}
