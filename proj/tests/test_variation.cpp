#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fracvar/error.hpp"
#include "fracvar/fbm.hpp"
#include "fracvar/variation.hpp"
#include "oracles.hpp"

using namespace fracvar;

TEST_CASE("sampling grid") {
  const auto g = SamplingGrid::from_alpha(1024, 0.5);
  CHECK(g.delta == doctest::Approx(1.0 / 32));
  CHECK_NOTHROW(g.validate());
  SamplingGrid bad{1024, 0.1, 0.5};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(SamplingGrid::from_alpha(0, 1.0), DomainError);
}

TEST_CASE("u statistic examples") {
  const Filter d1({-1, 1});
  const Filter d2({1, -2, 1});
  CHECK(u_statistic(std::vector<double>(10, 3.5), d1) == 0.0);
  std::vector<double> line(20);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 0.25 * static_cast<double>(i) - 1.0;
  CHECK(u_statistic(line, d2) == 0.0);
  CHECK(u_statistic(std::vector<double>{0, 1, 0, 1, 0}, d1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(u_statistic(std::vector<double>{0, 1}, d1), LengthError);
  CHECK_THROWS_AS(u_statistic(std::vector<double>{0, 1, 2}, d2), LengthError);
}

TEST_CASE("v statistic and the V/U identity") {
  const Filter d2({1, -2, 1});
  const Path flat{0.01, std::vector<double>(50, 1.0)};
  CHECK(v_statistic(flat, d2, 0.4) == doctest::Approx(-48.0 / 50).epsilon(1e-15));

  std::mt19937_64 gen(3);
  std::normal_distribution<double> z;
  const std::vector<Filter> corpus{Filter({-1, 1}), Filter({-1, 0, 1}), d2, Filter({1, 0, -2, 0, 1}),
                                   Filter({1, -3, 3, -1})};
  for (int trial = 0; trial < 20; ++trial) {
    Path p{std::pow(2.0, -(trial % 7)) * 0.37, std::vector<double>(64 + trial)};
    for (double& v : p.values) v = z(gen) * 10.0;
    for (const auto& f : corpus) {
      const double h = 0.05 + 0.045 * trial;
      const auto r = variation_report(p, f, h);
      const double n = static_cast<double>(p.size());
      CHECK(r.n_terms == p.size() - f.span_p());
      CHECK(r.u == u_statistic(p, f));
      const double sigma = filter_variance(f, p.delta, h);
      const double rhs = r.u / sigma - static_cast<double>(r.n_terms) / n;
      CHECK(std::abs(r.v - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      CHECK(r.v == v_statistic(p, f, h));
    }
  }
}

TEST_CASE("rho") {
  const Filter d1({-1, 1});
  CHECK(rho(Filter({1, -2, 1}), 0.3, 0) == 1.0);
  for (long lag : {1L, 2L, 5L, -3L}) CHECK(std::abs(rho(d1, 0.5, lag)) <= 1e-15);
  CHECK(rho(d1, 0.7, 1) == doctest::Approx((std::pow(2.0, 1.4) - 2.0) / 2.0).epsilon(1e-13));
  CHECK(rho(d1, 0.7, 1) == doctest::Approx(0.3195).epsilon(1e-3));
  for (const auto& f : {d1, Filter({1, 0, -2, 0, 1}), Filter({1, -3, 3, -1})}) {
    for (double h : {0.1, 0.5, 0.95}) {
      for (long lag = 1; lag < 40; ++lag) {
        CHECK(rho(f, h, lag) == rho(f, h, -lag));
        CHECK(std::abs(rho(f, h, lag)) <= 1.0);
      }
    }
  }
}

TEST_CASE("asymptotic variance") {
  const Filter d1({-1, 1});
  const Filter d2({1, -2, 1});
  const auto bm = asymptotic_variance(d1, 0.5);
  CHECK(bm.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(bm.truncation == 1'000'000);

  double prev = 0.0;
  for (long r : {1L, 10L, 100L, 1000L, 100000L}) {
    const auto a = asymptotic_variance(d2, 0.8, r);
    CHECK(a.value >= prev);
    CHECK(a.tail_estimate >= 0.0);
    prev = a.value;
  }
  // The difference of tail estimates should account for the lags between two windows.
  const auto short_w = asymptotic_variance(d1, 0.7, 1000);
  const auto long_w = asymptotic_variance(d1, 0.7, 1'000'000);
  const double gap = long_w.value - short_w.value;
  CHECK(short_w.tail_estimate - long_w.tail_estimate == doctest::Approx(gap).epsilon(0.05));

  CHECK_THROWS_AS(asymptotic_variance(d1, 0.9), ScopeError);
  CHECK_THROWS_AS(asymptotic_variance(d1, 0.75), ScopeError);
  CHECK_NOTHROW(asymptotic_variance(d2, 0.9));
}

TEST_CASE("rho decays fast enough for order-2 filters at H = 0.9") {
  const Filter d2({1, -2, 1});
  const IncrementCovariance cov(d2, 0.9);
  // r^2 rho^2 ~ r^{2 + 4H - 8}: the partial sums must settle.
  double sum = 0.0;
  double at_half = 0.0;
  const long window = 200000;
  for (long r = 1; r <= window; ++r) {
    const double c = cov.correlation(r);
    sum += static_cast<double>(r) * static_cast<double>(r) * c * c;
    if (r == window / 2) at_half = sum;
  }
  CHECK(std::isfinite(sum));
  CHECK((sum - at_half) <= 1e-6 * sum);
}

TEST_CASE("mesh admissibility") {
  const auto a = mesh_admissible(0.3, 1.0, 1);
  CHECK(a.clt_applies);
  REQUIRE(a.constraints.size() == 1);
  CHECK(a.constraints[0].rhs == doctest::Approx(1.0 / 1.4));
  CHECK(mesh_admissible(0.7, 1.0, 1).clt_applies);
  const auto b = mesh_admissible(0.8, 1.0, 2);
  CHECK_FALSE(b.clt_applies);
  bool named = false;
  for (const auto& c : b.constraints) named = named || (!c.satisfied && c.rhs == doctest::Approx(1.5));
  CHECK(named);
  CHECK(mesh_admissible(0.8, 2.0, 2).clt_applies);
  CHECK_FALSE(mesh_admissible(0.9, 2.0, 1).clt_applies);
  CHECK_FALSE(mesh_admissible(0.6, 0.9, 2).clt_applies);
  CHECK_FALSE(mesh_admissible(0.2, 0.6, 1).clt_applies);
}

TEST_CASE("sigma_H matches Monte Carlo") {
  struct Case {
    Filter f;
    double h;
  };
  const std::vector<Case> cases{{Filter({-1, 1}), 0.3}, {Filter({1, -2, 1}), 0.8}};
  const std::size_t n = 4096;
  const int reps = 2000;
  for (const auto& c : cases) {
    const FgnGenerator gen(n - 1, c.h);
    std::vector<double> samples(reps);
    for (int r = 0; r < reps; ++r) {
      const Path p = cumulate(gen.sample(9000 + r, 1.0 / n), 1.0 / n);
      samples[r] = std::sqrt(static_cast<double>(n)) * v_statistic(p, c.f, c.h);
    }
    double mean = 0.0;
    for (double s : samples) mean += s / reps;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean) / (reps - 1);
    const double sigma = asymptotic_variance(c.f, c.h).value;
    MESSAGE("H=" << c.h << " MC variance " << var << " vs sigma_H " << sigma);
    CHECK(var == doctest::Approx(sigma).epsilon(0.10));
  }
}
