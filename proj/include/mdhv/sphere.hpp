#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "mdhv/bloch.hpp"
#include "mdhv/rng.hpp"

namespace mdhv::sphere {

inline constexpr double kArea = 4.0 * std::numbers::pi;

/// Uniform point: z ~ U[-1, 1], azimuth ~ U[0, 2 pi).
[[nodiscard]] BlochVector uniform(Stream& rng) noexcept;

/// Uniform on the cap {v : v.axis >= min_cos}.
[[nodiscard]] BlochVector uniform_cap(const Frame& frame, double min_cos, Stream& rng) noexcept;

/// Uniform on the open hemisphere {v : v.axis > 0}.
[[nodiscard]] BlochVector uniform_hemisphere(const BlochVector& axis, Stream& rng) noexcept;

/**
 * Stratified points for integrating over the sphere: the upper hemisphere is
 * cut into equal-area (z, azimuth) cells, one jittered point per cell, and each
 * point is paired with its antipode. Every point carries weight kArea / size().
 */
[[nodiscard]] std::vector<BlochVector> stratified(std::size_t min_points, Stream& rng);

/// Gauss-Legendre nodes and weights on [lo, hi].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static GaussLegendre on(std::size_t n, double lo, double hi);
};

}  // namespace mdhv::sphere
