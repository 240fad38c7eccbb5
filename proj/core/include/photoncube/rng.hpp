#pragma once

#include <cstdint>

namespace photoncube {

/// Stateless counter-based generator: a draw is a pure function of
/// (seed, stream, counter). The mixer is the SplitMix64 finalizer.
namespace rng {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream tags keep different consumers of the same seed independent.
enum class Stream : std::uint64_t {
  photon = 0x5048'4f54'4f4eULL,
  mask = 0x4d41'534bULL,
  code = 0x434f'4445ULL,
  scene = 0x5343'454eULL,
};

constexpr std::uint64_t draw(std::uint64_t seed, Stream stream, std::uint64_t counter) {
  const std::uint64_t key = mix64(seed ^ mix64(static_cast<std::uint64_t>(stream)));
  return mix64(key ^ mix64(counter));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double uniform(std::uint64_t seed, Stream stream, std::uint64_t counter) {
  return to_unit(draw(seed, stream, counter));
}

}  // namespace rng
}  // namespace photoncube
