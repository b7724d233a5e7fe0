#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gpe {

// Seeded random source with fixed value transforms.
//
// std::mt19937_64 has an implementation-independent output sequence, but the
// standard <random> distributions do not, so every transform from raw 64-bit
// words to doubles is spelled out here. Two builds with the same seed produce
// the same stream on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1): top 53 bits of one output word.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller. Consumes exactly two uniforms per call
  // and never caches the second deviate, so call counts stay predictable.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    // 1 - u1 is in (0, 1], keeping the log argument away from zero.
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 eng_;
};

// FNV-1a over arbitrary bytes; used for signal hashes, experiment config
// fingerprints, and derived per-grid-point seeds.
inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

// Chain a 64-bit value into an FNV hash, least significant byte first, so the
// result does not depend on host endianness.
inline std::uint64_t fnv1a64_u64(std::uint64_t value,
                                 std::uint64_t h = 0xcbf29ce484222325ull) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  return fnv1a64(bytes, 8, h);
}

}
