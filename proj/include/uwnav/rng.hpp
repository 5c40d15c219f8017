#pragma once

#include <cstdint>
#include <random>

namespace uwnav {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of sub-stream (trial, stream) under a master seed. Streams are addressed by a
/// fixed counter so adding consumers never shifts the draws of existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                    std::uint64_t stream) {
  return mix64(mix64(master ^ mix64(trial + 1)) ^ mix64((stream + 1) << 20));
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t trial,
                                   std::uint64_t stream) {
  return std::mt19937_64(derive_seed(master, trial, stream));
}

}  // namespace uwnav
