#include "mdhv/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gsl/gsl_integration.h>

namespace mdhv::sphere {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

BlochVector from_z_phi(double z, double phi) noexcept {
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return UnitVectorAccess::make(r * std::cos(phi), r * std::sin(phi), z);
}
}  // namespace

BlochVector uniform(Stream& rng) noexcept {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, kTwoPi);
  return from_z_phi(z, phi);
}

BlochVector uniform_cap(const Frame& frame, double min_cos, Stream& rng) noexcept {
  const double lo = std::clamp(min_cos, -1.0, 1.0);
  const double c = rng.uniform(lo, 1.0);
  const double phi = rng.uniform(0.0, kTwoPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - c * c));
  return frame.compose(r * std::cos(phi), r * std::sin(phi), c);
}

BlochVector uniform_hemisphere(const BlochVector& axis, Stream& rng) noexcept {
  for (;;) {
    const BlochVector v = uniform(rng);
    const double d = v.dot(axis);
    if (d > 0.0) return v;
    if (d < 0.0) return -v;
  }
}

std::vector<BlochVector> stratified(std::size_t min_points, Stream& rng) {
  // n_z * n_phi cells on the upper hemisphere, with n_phi = 2 n_z so cells are roughly square.
  const std::size_t half = std::max<std::size_t>(2, (min_points + 1) / 2);
  const auto nz = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(half / 2.0))));
  const std::size_t nphi = 2 * nz;
  std::vector<BlochVector> out;
  out.reserve(2 * nz * nphi);
  for (std::size_t i = 0; i < nz; ++i) {
    for (std::size_t j = 0; j < nphi; ++j) {
      const double z = (static_cast<double>(i) + rng.uniform()) / static_cast<double>(nz);
      const double phi = kTwoPi * (static_cast<double>(j) + rng.uniform()) / static_cast<double>(nphi);
      const BlochVector v = from_z_phi(z, phi);
      out.push_back(v);
      out.push_back(-v);
    }
  }
  return out;
}

GaussLegendre GaussLegendre::on(std::size_t n, double lo, double hi) {
  if (n == 0) throw std::invalid_argument("GaussLegendre: need at least one node");
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
  if (table == nullptr) throw std::runtime_error("GaussLegendre: table allocation failed");
  GaussLegendre out;
  out.nodes.resize(n);
  out.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(lo, hi, i, &out.nodes[i], &out.weights[i], table);
  }
  gsl_integration_glfixed_table_free(table);
  return out;
}

}  // namespace mdhv::sphere
