#pragma once

#include <cstdint>

namespace mcg {

// 64-bit splitmix generator. The exact sequence is a data contract: deck
// shuffles, dataset sampling and search tie-breaking must all be
// reproducible from the seed alone, in any language. The algorithm, spelled
// out so it can be re-implemented independently:
//
//   next():  state += 0x9E3779B97F4A7C15
//            z = state
//            z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
//            z ^= z >> 27;  z *= 0x94D049BB133111EB
//            return z ^ (z >> 31)
//
//   next_below(n) = next() % n              (plain modulo reduction)
//   next_double() = (next() >> 11) * 2^-53  (uniform in [0,1))
class SplitMix64 {
 public:
  SplitMix64() = default;
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). n must be nonzero.
  uint64_t next_below(uint64_t n) { return next() % n; }

  // Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_ = 0;
};

// Splitmix finalizer on its own; used to derive independent substreams.
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for substream `stream` of a base seed (worker index, game index, ...).
// derive_seed(s, k) = mix64(s + (k + 1) * 0x9E3779B97F4A7C15).
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  return mix64(base + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace mcg
