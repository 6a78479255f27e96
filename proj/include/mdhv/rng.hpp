#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace mdhv {

/**
 * Counter-based random stream. The n-th output is a pure function of
 * (key, n), so a stream can be re-created from (seed, stream index) on any
 * worker and produces identical values regardless of scheduling.
 *
 * Satisfies UniformRandomBitGenerator, but the library only draws through
 * uniform() so results never depend on the standard library's distributions.
 */
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed, std::uint64_t index = 0) noexcept;

  /// Independent child stream; derive(i) of equal parents are equal.
  [[nodiscard]] Stream derive(std::uint64_t index) const noexcept { return Stream(key_, index); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Index drawn from unnormalized non-negative weights (linear scan).
  std::size_t categorical(std::span<const double> weights) noexcept;

  /// True with probability p.
  bool bernoulli(double p) noexcept { return uniform() < p; }

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] std::uint64_t position() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mdhv
