#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fockborn {

/// Counter-based generator: draw `i` is a pure function of (seed, i), so any
/// partition of the index range reproduces the same stream bit for bit.
/// The mixing function is the SplitMix64 finalizer; `bits(i)` equals the
/// (i+1)-th output of a SplitMix64 generator seeded with `seed`.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    std::uint64_t z = seed_ + (counter + 1) * kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Independent child stream.
  constexpr CounterRng split(std::uint64_t stream) const noexcept {
    return CounterRng(bits(~stream) ^ (stream * kGolden));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t seed_;
};

/// Sequential view over a CounterRng for code that just wants "the next one".
class RngStream {
 public:
  explicit constexpr RngStream(std::uint64_t seed) noexcept : rng_(seed) {}
  explicit constexpr RngStream(CounterRng rng) noexcept : rng_(rng) {}

  double uniform() noexcept { return rng_.uniform(next_++); }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  /// Box-Muller; deliberately not std::normal_distribution, whose output is
  /// implementation-defined.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

 private:
  CounterRng rng_;
  std::uint64_t next_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fockborn
