#pragma once

#include <cstdint>

namespace chunkwise {

/// splitmix64. The one generator behind every random choice in the toolkit
/// (RAND chunk sizes, workload sampling, per-loop seeds), chosen so a
/// reimplementation in any language needs only these three constants:
///
///   state += 0x9e3779b97f4a7c15
///   z = (z ^ z>>30) * 0xbf58476d1ce4e5b9
///   z = (z ^ z>>27) * 0x94d049bb133111eb
///   return z ^ z>>31
struct SplitMix64 {
  std::uint64_t state = 0;

  constexpr explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound). Plain modulo: the bias is immaterial at the
  /// bounds used here and keeps the stream trivially reproducible.
  constexpr std::uint64_t next_below(std::uint64_t bound) {
    return bound == 0 ? 0 : next() % bound;
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

/// One splitmix64 scrambling round. Used to derive independent child seeds
/// (e.g. per-loop seeds in a sequence) from a master seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed) {
  return SplitMix64(seed).next();
}

}  // namespace chunkwise
