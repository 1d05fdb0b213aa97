#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace confmap {

/// splitmix64 (Vigna, public domain): 64-bit state, one multiply-xor-shift
/// finalizer per output. All noise in this library is drawn from per-pixel
/// splitmix64 streams keyed by (seed, pixel index), so outputs do not depend
/// on traversal or thread order and are identical across standard library
/// implementations.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1), 53 significant bits.
  double uniform01() { return (next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0,1]; safe as a log() argument.
  double uniform_open() { return ((next() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (cosine branch).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  /// Poisson draw by Knuth's product method, applied to chunks of the mean
  /// so the running product stays well above the underflow threshold.
  /// Exact for any lambda >= 0 by Poisson additivity.
  std::int64_t poisson(double lambda) {
    if (lambda < 0.0 || !std::isfinite(lambda))
      throw std::invalid_argument("poisson: lambda must be finite and >= 0");
    std::int64_t k = 0;
    while (lambda > 0.0) {
      const double chunk = lambda > 16.0 ? 16.0 : lambda;
      lambda -= chunk;
      const double limit = std::exp(-chunk);
      double p = 1.0;
      for (;;) {
        p *= uniform01();
        if (p <= limit) break;
        ++k;
      }
    }
    return k;
  }
};

/// splitmix64 finalizer as a standalone mixing function.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Independent stream for one pixel (or any other counter).
inline SplitMix64 pixel_stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed ^ ((index + 1) * 0x9E3779B97F4A7C15ULL)));
}

}  // namespace confmap
