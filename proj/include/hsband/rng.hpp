// Deterministic random helpers. mt19937_64 produces a standard-specified
// stream, but std::shuffle and std::uniform_int_distribution do not, so the
// draws below are hand-rolled to keep seeded runs reproducible across
// standard library implementations.
#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hsband {

// Unbiased integer in [0, bound) via rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t accept_below = UINT64_MAX / bound * bound;
  std::uint64_t r = rng();
  while (r >= accept_below) r = rng();
  return r % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

}  // namespace hsband
