#include "mdhv/rng.hpp"

namespace mdhv {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;
}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t index) noexcept
    : key_(mix64(mix64(seed) ^ mix64((index + 1) * kStreamSalt))) {}

Stream::result_type Stream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

std::size_t Stream::categorical(std::span<const double> weights) noexcept {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  return last_positive;  // rounding at the top end
}

}  // namespace mdhv
