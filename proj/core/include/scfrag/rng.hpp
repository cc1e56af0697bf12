#pragma once

#include <cstdint>

namespace scfrag {

// SplitMix64 is the project's pinned generator: 64-bit state, one
// add + mix per draw.  All sampling in the library goes through it (no
// std::*_distribution, whose output is implementation defined), so a
// given seed produces the same stream everywhere.
//
// Substreams are derived by hashing (master seed, stream index).  Stream
// i is the same object no matter which worker evaluates it, which makes
// trial-parallel runs schedule independent.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1); rejects exact zeros so logs are safe.
  double next_double_open() noexcept {
    double u;
    do {
      u = next_double();
    } while (u == 0.0);
    return u;
  }

  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) noexcept;

  static SplitMix64 substream(std::uint64_t master, std::uint64_t index) noexcept {
    return SplitMix64(mix(master ^ mix(index + 0x9E3779B97F4A7C15ULL)));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
    z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
    return z ^ (z >> 33);
  }

  std::uint64_t state_;
};

// Standard normal via the Marsaglia polar method (uniforms only).
double sample_standard_normal(SplitMix64& rng) noexcept;

// log of a Gamma(shape, 1) draw.  Working in logs keeps shapes far below
// one usable: the boost step multiplies by U^{1/shape}, which underflows
// a plain double already around shape ~ 1e-2.
double sample_gamma_log(SplitMix64& rng, double shape);

// Beta(alpha, beta) draw as ratio of two Gamma draws, assembled in logs.
double sample_beta(SplitMix64& rng, double alpha, double beta);

}  // namespace scfrag
