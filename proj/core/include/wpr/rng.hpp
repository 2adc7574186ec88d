#pragma once

#include <cstdint>
#include <random>

namespace wpr {

// SplitMix64 finalizer: a full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Reproducible per-purpose generator streams derived from one master seed.
// A stream's identity depends only on (seed, kind, index, salt), never on
// how many streams exist, so enlarging the particle count leaves every
// existing particle's randomness unchanged. Salts separate derived runs
// (e.g. step-refined re-simulation) from the primary ones.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Stream owned by particle `index`; drives its initial position, its
  // Brownian increments, and its boundary-bridge coin flips.
  std::mt19937_64 particle(std::uint64_t index, std::uint64_t salt = 0) const {
    return make(kParticle, index, salt);
  }

  // Stream for the common noise shared by all particles.
  std::mt19937_64 common(std::uint64_t salt = 0) const {
    return make(kCommon, 0, salt);
  }

  // Stream for auxiliary randomized procedures (bootstrap resampling).
  std::mt19937_64 auxiliary(std::uint64_t index, std::uint64_t salt = 0) const {
    return make(kAuxiliary, index, salt);
  }

 private:
  enum Kind : std::uint64_t { kParticle = 1, kCommon = 2, kAuxiliary = 3 };

  std::mt19937_64 make(std::uint64_t kind, std::uint64_t index,
                       std::uint64_t salt) const {
    std::uint64_t s = mix64(seed_ ^ mix64(kind));
    s = mix64(s ^ index);
    s = mix64(s ^ mix64(salt));
    return std::mt19937_64(s);
  }

  std::uint64_t seed_;
};

}  // namespace wpr
