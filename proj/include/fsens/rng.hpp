#pragma once

#include <cmath>
#include <cstdint>

namespace fsens {

// Counter-based generator: output k is the SplitMix64 finalizer applied to
// seed + (k+1)*golden. Random access by counter keeps sampling reproducible
// for any worker partitioning; the algorithm name is recorded in run
// provenance. Exact stream identity across platforms is not promised.
inline constexpr const char* kRngAlgorithm = "splitmix64-counter";

inline std::uint64_t rng_u64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform on (0,1), endpoints excluded.
inline double rng_uniform(std::uint64_t seed, std::uint64_t counter) {
  return (static_cast<double>(rng_u64(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal by Box-Muller. Each (seed, counter) pair is an
// independent draw backed by its own two uniforms.
inline double rng_normal(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t sub = rng_u64(seed, counter);
  const double u1 = rng_uniform(sub, 0);
  const double u2 = rng_uniform(sub, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Derived seed for replicate/sweep substreams; the counter namespace is
// offset away from per-draw counters.
inline std::uint64_t rng_substream(std::uint64_t seed, std::uint64_t stream) {
  return rng_u64(seed, (1ULL << 62) + stream);
}

}  // namespace fsens
