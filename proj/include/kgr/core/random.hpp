#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace kgr {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Per-stage seed: stages draw from independent streams of one global seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) {
  return splitmix64(seed ^ fnv1a64(stage));
}

/// Uniform integer in [0, n).
template <typename Int>
Int uniform_index(Rng& rng, Int n) {
  return std::uniform_int_distribution<Int>(0, n - 1)(rng);
}

/// k distinct values from [0, n) via partial Fisher-Yates, in draw order.
template <typename Int>
std::vector<Int> sample_without_replacement(Rng& rng, Int n, Int k) {
  std::vector<Int> pool(n);
  for (Int i = 0; i < n; ++i) pool[i] = i;
  for (Int i = 0; i < k; ++i) {
    const Int j = i + uniform_index<Int>(rng, n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace kgr
