#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace fracvar {

/// One round of the splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text) noexcept;

/// Independent stream seed for replication `rep` at sample size `n` of the
/// study `label`. Adding new labels never perturbs existing streams.
std::uint64_t stream_seed(std::uint64_t base, std::string_view label, std::uint64_t n, std::uint64_t rep) noexcept;

/// Standard normal variates from a 64-bit Mersenne twister whose state is
/// derived from the seed by splitmix64.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed);

  double next() { return dist_(engine_); }
  void fill(std::span<double> out);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace fracvar
