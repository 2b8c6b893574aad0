#pragma once

#include <cstdint>
#include <random>

namespace advconf {

// Seeded generator with platform-independent draws. std::uniform_*_distribution
// is implementation-defined, so reports would not be byte-stable across
// standard libraries if we used it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t index(std::uint64_t n);

  bool coin() { return (engine_() >> 63) != 0; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace advconf
