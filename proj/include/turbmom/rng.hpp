#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace turbmom {

/// splitmix64 mix of a base seed with a stream index.
///
/// Used to derive independent, reproducible sub-streams (one per Monte-Carlo
/// realization) from a single run seed, independent of scheduling order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

/// Deterministic normal generator.
///
/// std::normal_distribution leaves the algorithm unspecified, so we pin
/// Box-Muller on top of mt19937_64 to keep output byte-stable.
class GaussianRng {
public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  /// Uniform in [0,1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t raw() { return engine_(); }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace turbmom
