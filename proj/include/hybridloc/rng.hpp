#ifndef HYBRIDLOC_RNG_HPP_
#define HYBRIDLOC_RNG_HPP_

#include <array>
#include <cstdint>

namespace hybridloc {

/// SplitMix64 mixer (Steele, Lea, Flood). Used for seed expansion and for
/// deriving independent per-run seeds; never used as the main stream.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

/// Deterministic random stream: xoshiro256++ (Blackman & Vigna), seeded via
/// SplitMix64. The integer and uniform streams are bit-identical across
/// platforms; normal draws additionally depend on the platform's libm, which
/// is fixed for a given toolchain, so repeated runs on one machine are
/// bit-reproducible. Standard library engines are deliberately not used --
/// their distributions are unspecified across implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal draw via the Box-Muller transform. Draws are produced
  /// in pairs; the spare is cached, so each pair consumes exactly two
  /// uniforms from the stream.
  double normal();

 private:
  std::array<uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Seed for an independent stream identified by (master_seed, index).
/// Distinct indices map to distinct seeds (the mixer is a bijection).
uint64_t derive_seed(uint64_t master_seed, uint64_t index);

}  // namespace hybridloc

#endif  // HYBRIDLOC_RNG_HPP_
