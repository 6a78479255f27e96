#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>

#include "mdhv/bloch.hpp"
#include "mdhv/quantum.hpp"

namespace mdhv {

/// lambda_j of a finite ontic space.
struct DiscreteIndex {
  std::size_t j = 0;
  bool operator==(const DiscreteIndex&) const = default;
};

/**
 * A point of the interval model's range. That model's response function reads
 * the prepared state, so the state is part of the ontic point; an untagged
 * point is read in whichever context evaluates it. Tags compare as rays.
 */
struct IntervalPoint {
  double x = 0.0;
  std::shared_ptr<const StateVector> preparation;
  bool operator==(const IntervalPoint& o) const;
};

struct SpherePoint {
  BlochVector v;
  bool operator==(const SpherePoint&) const = default;
};

/// (lambda_k, lambda-hat): outcome index k of the conditioning measurement plus a sphere vector.
struct LabeledSphere {
  std::size_t k = 0;
  BlochVector v;
  bool operator==(const LabeledSphere&) const = default;
};

/// Two sphere vectors constrained to second == -first.
class AntipodalPair {
 public:
  explicit AntipodalPair(const BlochVector& first) noexcept : first_(first), second_(-first) {}

  [[nodiscard]] const BlochVector& first() const noexcept { return first_; }
  [[nodiscard]] const BlochVector& second() const noexcept { return second_; }
  bool operator==(const AntipodalPair&) const = default;

 private:
  BlochVector first_;
  BlochVector second_;
};

/// (i, j, A, B): local outcome tags and the measurement settings carried by the hidden variable.
struct SettingsOutcomePair {
  int i = 1;
  int j = 1;
  BlochVector a;
  BlochVector b;
  bool operator==(const SettingsOutcomePair&) const = default;
};

using OnticPoint = std::variant<DiscreteIndex, IntervalPoint, SpherePoint, LabeledSphere, AntipodalPair, SettingsOutcomePair>;

[[nodiscard]] std::string describe(const OnticPoint& point);

}  // namespace mdhv
