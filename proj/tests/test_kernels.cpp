#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fracvar/kernels.hpp"
#include "oracles.hpp"

using namespace fracvar;

namespace {

std::vector<const kernels::KernelTable*> vector_tables() {
  std::vector<const kernels::KernelTable*> out;
  if (auto* t = kernels::avx2()) out.push_back(t);
  if (auto* t = kernels::neon()) out.push_back(t);
  return out;
}

const std::vector<std::vector<double>> kFilters{
    {-1, 1}, {-1, 0, 1}, {1, -2, 1}, {1, 0, -2, 0, 1}, {1, -3, 3, -1}, {0.25, -0.5, 0.1, 0.15}};

}  // namespace

TEST_CASE("active table is one of the known tables") {
  const auto& t = kernels::active();
  MESSAGE("active kernel: " << t.name);
  CHECK((t.name == "scalar" || t.name == "avx2" || t.name == "neon"));
}

TEST_CASE("scalar reference agrees with an extended-precision oracle") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (const auto& a : kFilters) {
    std::vector<double> x(301);
    for (auto& v : x) v = z(rng);
    const double got = kernels::scalar().filter_sum_squares(x, a);
    const double want = static_cast<double>(oracle::filtered_square_sum(x, a));
    CHECK(std::abs(got - want) <= 1e-13 * want);
  }
}

TEST_CASE("vector kernels match the scalar reference") {
  const auto tables = vector_tables();
  if (tables.empty()) {
    MESSAGE("no vector kernels on this CPU");
    return;
  }
  std::mt19937_64 rng(12);
  std::normal_distribution<double> z;
  for (const auto* t : tables) {
    for (const auto& a : kFilters) {
      // Lengths straddle the 8- and 4-wide block boundaries.
      for (std::size_t len = a.size(); len < a.size() + 37; ++len) {
        std::vector<double> x(len);
        for (auto& v : x) v = 100.0 * z(rng);
        const std::size_t n_out = len - a.size() + 1;
        std::vector<double> ref(n_out), got(n_out);
        kernels::scalar().filter_apply(x, a, ref);
        t->filter_apply(x, a, got);
        double scale = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) scale += std::abs(a[i]);
        for (std::size_t j = 0; j < n_out; ++j) {
          CHECK(std::abs(ref[j] - got[j]) <= 1e-14 * scale * 100.0 * 8.0);
        }
        const double s_ref = kernels::scalar().filter_sum_squares(x, a);
        const double s_got = t->filter_sum_squares(x, a);
        CHECK(std::abs(s_ref - s_got) <= 1e-12 * std::max(s_ref, 1e-300));
        const double q_ref = kernels::scalar().sum_squares(x);
        CHECK(std::abs(q_ref - t->sum_squares(x)) <= 1e-13 * q_ref);
      }
    }
  }
}

TEST_CASE("vector kernels are exact on integer data") {
  for (const auto* t : vector_tables()) {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>((i * 7919) % 101) - 50.0;
    for (const auto& a : kFilters) {
      if (a.back() != std::round(a.back())) continue;
      CHECK(t->filter_sum_squares(x, a) == kernels::scalar().filter_sum_squares(x, a));
    }
  }
}

TEST_CASE("zero-output range") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> a{1.0, -2.0, 1.0};
  CHECK(kernels::active().filter_sum_squares(x, a) == 0.0);
}
