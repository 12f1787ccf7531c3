#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace cogmux {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** with SplitMix64 seeding. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Stream `index` under master seed `seed`: the engine is seeded with the
/// SplitMix64 output of (seed XOR golden*index), so streams never share state.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  return splitmix64(s);
}

/// Variates on top of Xoshiro256. Normals use Box-Muller with a cached pair so
/// results do not depend on a standard library's distribution implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}
  RngStream(std::uint64_t seed, std::uint64_t index) : eng_(derive_stream_seed(seed, index)) {}

  std::uint64_t bits() { return eng_(); }

  /// uniform on [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  /// CN(0, var): real and imaginary parts N(0, var/2).
  std::complex<double> complex_normal(double var = 1.0) {
    const double s = std::sqrt(0.5 * var);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

  bool bernoulli(double p) { return uniform() < p; }

  std::complex<double> unit_phase() {
    const double th = 2.0 * std::numbers::pi * uniform();
    return {std::cos(th), std::sin(th)};
  }

 private:
  Xoshiro256 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cogmux
