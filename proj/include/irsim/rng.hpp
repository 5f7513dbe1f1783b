#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace irsim {

// Deterministic substreams keyed by (seed, trial, stream): each key mixes to
// an independent engine seed, so parallel trials draw the same numbers no
// matter how work is scheduled. Gaussians come from an explicit Box-Muller
// transform to keep the byte stream identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static Rng substream(std::uint64_t seed, std::uint64_t trial,
                       std::uint64_t stream) {
    std::uint64_t k = seed;
    k = mix(k + 0x9e3779b97f4a7c15ULL * (trial + 1));
    k = mix(k + 0x9e3779b97f4a7c15ULL * (stream + 1));
    return Rng(k, 0);
  }

  /// Uniform on [0, 1).
  double uniform() {
    return double(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = double((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = double(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> cnormal(double variance = 1.0) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

 private:
  Rng(std::uint64_t mixed, int) : engine_(mixed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace irsim
