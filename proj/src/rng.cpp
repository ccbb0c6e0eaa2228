#include "fracvar/rng.hpp"

namespace fracvar {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t stream_seed(std::uint64_t base, std::string_view label, std::uint64_t n, std::uint64_t rep) noexcept {
  std::uint64_t h = splitmix64(fnv1a(label));
  h = splitmix64(h ^ n);
  h = splitmix64(h ^ rep);
  return base ^ h;
}

NormalSource::NormalSource(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)), static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(~seed)), static_cast<std::uint32_t>(splitmix64(~seed) >> 32)};
  engine_.seed(seq);
}

void NormalSource::fill(std::span<double> out) {
  for (double& v : out) v = dist_(engine_);
}

}  // namespace fracvar
