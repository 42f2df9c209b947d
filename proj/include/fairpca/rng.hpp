#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fairpca {

/// Seedable random source used everywhere randomness is needed, so that every
/// report is reproducible from its recorded seed.
///
/// The raw stream is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard, so the integer stream is identical on every platform.
/// Distributions are implemented here rather than with <random> adaptors
/// (which are implementation-defined): uniforms map the top 53 bits of each
/// draw onto [0,1), normals come from the Box-Muller transform. Normal draws
/// therefore match across platforms up to libm rounding of log/cos/sin.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1): (u >> 11) * 2^-53.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]: ((u >> 11) + 1) * 2^-53.
  double uniform_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Multiply-shift rejection-free mapping is biased for huge n; fine for the
    // small index ranges used here, but keep an exact path anyway.
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t u;
    do {
      u = engine_();
    } while (u >= limit);
    return u % n;
  }

  /// Standard normal, Box-Muller with pair caching.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace fairpca
