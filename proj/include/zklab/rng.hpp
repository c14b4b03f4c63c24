#pragma once

#include <cstdint>
#include <random>

namespace zk {

/// Independent purposes draw from disjoint streams of the same seed.
enum class Stream : std::uint64_t { field = 1, modulation = 2, triple = 3, region = 4 };

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for sample `index` of `stream`, reproducible from the seed alone.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index, Stream stream) {
  const std::uint64_t h =
      splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(stream)) ^ index);
  return std::mt19937_64(h);
}

}  // namespace zk
