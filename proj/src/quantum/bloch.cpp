#include "mdhv/bloch.hpp"

#include <algorithm>
#include <cstdio>

#include "mdhv/errors.hpp"
#include "mdhv/tolerances.hpp"

namespace mdhv {

BlochVector BlochVector::from_components(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 1e-12) || !std::isfinite(n)) {
    throw InvariantError("BlochVector: cannot normalize a zero or non-finite vector");
  }
  return BlochVector{x / n, y / n, z / n};
}

BlochVector BlochVector::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return BlochVector{st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

BlochVector BlochVector::unit(double x, double y, double z) {
  const double n2 = x * x + y * y + z * z;
  if (!(std::abs(std::sqrt(n2) - 1.0) <= tol::kStructural)) {
    throw InvariantError("BlochVector: components are not unit length");
  }
  return BlochVector{x, y, z};
}

double BlochVector::angle_to(const BlochVector& o) const noexcept {
  return std::acos(std::clamp(dot(o), -1.0, 1.0));
}

std::string BlochVector::to_string() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6f, %.6f, %.6f)", c_[0], c_[1], c_[2]);
  return buf;
}

Frame Frame::around(const BlochVector& axis) {
  // Pick the coordinate axis least aligned with n to seed Gram-Schmidt.
  const auto& n = axis.components();
  std::array<double, 3> seed{0.0, 0.0, 0.0};
  const auto ax = std::array<double, 3>{std::abs(n[0]), std::abs(n[1]), std::abs(n[2])};
  seed[static_cast<std::size_t>(std::min_element(ax.begin(), ax.end()) - ax.begin())] = 1.0;

  const double d = seed[0] * n[0] + seed[1] * n[1] + seed[2] * n[2];
  const BlochVector u =
      BlochVector::from_components(seed[0] - d * n[0], seed[1] - d * n[1], seed[2] - d * n[2]);
  // v = n x u
  const BlochVector v = BlochVector::from_components(n[1] * u.z() - n[2] * u.y(), n[2] * u.x() - n[0] * u.z(),
                                                     n[0] * u.y() - n[1] * u.x());
  return Frame{u, v, axis};
}

BlochVector Frame::compose(double a, double b, double c) const noexcept {
  return UnitVectorAccess::make(a * u.x() + b * v.x() + c * n.x(), a * u.y() + b * v.y() + c * n.y(),
                                a * u.z() + b * v.z() + c * n.z());
}

}  // namespace mdhv
