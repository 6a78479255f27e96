#pragma once

#include <array>
#include <cmath>
#include <string>

namespace mdhv {

/// Heaviside step with the convention Theta(0) = 1.
[[nodiscard]] constexpr double step(double x) noexcept { return x >= 0.0 ? 1.0 : 0.0; }

/// Sign function with the convention Sign(0) = +1. Returns +1 or -1.
[[nodiscard]] constexpr int sign(double x) noexcept { return x >= 0.0 ? 1 : -1; }

/**
 * A unit vector in R^3. Used both for qubit pure states (Bloch sphere) and for
 * spin measurement axes and sphere-valued hidden variables.
 */
class BlochVector {
 public:
  /// Normalizes (x, y, z); throws InvariantError on a (near) zero vector.
  static BlochVector from_components(double x, double y, double z);

  /// Polar angle theta and azimuth phi, both in radians.
  static BlochVector from_angles(double theta, double phi);

  /// Wraps components that are already unit length (within 1e-9); throws otherwise.
  static BlochVector unit(double x, double y, double z);

  static BlochVector x_axis() { return BlochVector{1.0, 0.0, 0.0}; }
  static BlochVector y_axis() { return BlochVector{0.0, 1.0, 0.0}; }
  static BlochVector z_axis() { return BlochVector{0.0, 0.0, 1.0}; }

  [[nodiscard]] double x() const noexcept { return c_[0]; }
  [[nodiscard]] double y() const noexcept { return c_[1]; }
  [[nodiscard]] double z() const noexcept { return c_[2]; }
  [[nodiscard]] const std::array<double, 3>& components() const noexcept { return c_; }

  [[nodiscard]] double dot(const BlochVector& o) const noexcept {
    return c_[0] * o.c_[0] + c_[1] * o.c_[1] + c_[2] * o.c_[2];
  }

  /// Exact negation; -(-v) == v bit for bit.
  [[nodiscard]] BlochVector operator-() const noexcept { return BlochVector{-c_[0], -c_[1], -c_[2]}; }

  [[nodiscard]] bool operator==(const BlochVector&) const = default;

  /// Angle to another unit vector in [0, pi], with the dot product clamped to [-1, 1].
  [[nodiscard]] double angle_to(const BlochVector& o) const noexcept;

  [[nodiscard]] std::string to_string() const;

 private:
  constexpr BlochVector(double x, double y, double z) noexcept : c_{x, y, z} {}
  friend struct UnitVectorAccess;

  std::array<double, 3> c_;
};

/// Access for code that produces unit vectors by construction (samplers, rotations).
struct UnitVectorAccess {
  static constexpr BlochVector make(double x, double y, double z) noexcept { return BlochVector{x, y, z}; }
};

/// Completes `n` to a right-handed orthonormal frame (u, v, n).
struct Frame {
  BlochVector u;
  BlochVector v;
  BlochVector n;

  static Frame around(const BlochVector& axis);

  /// Vector with components (a, b, c) in this frame, i.e. a*u + b*v + c*n.
  [[nodiscard]] BlochVector compose(double a, double b, double c) const noexcept;
};

}  // namespace mdhv
