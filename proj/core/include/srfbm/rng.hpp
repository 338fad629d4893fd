#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace srfbm {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` of `master`. Counter-based, so streams can be
/// derived in any order on any worker.
constexpr std::uint64_t mix64(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64_finalize(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

constexpr std::uint64_t mix64(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(master, a), b);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

void fill_standard_normal(Engine& engine, std::span<double> out);

}  // namespace srfbm
