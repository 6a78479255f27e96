#pragma once

#include <string>
#include <variant>

#include "mdhv/bloch.hpp"
#include "mdhv/quantum.hpp"

namespace mdhv {

/// The two-qubit singlet as a preparation tag.
struct Singlet {};

/// Spin measurement axes of the two parties.
struct QubitPairSettings {
  BlochVector a;
  BlochVector b;
};

using Preparation = std::variant<StateVector, DensityMatrix, Singlet>;
using Measurement = std::variant<Povm, QubitPairSettings>;

/**
 * The conditioning pair (preparation, measurement) of a measurement-dependent
 * density. A singlet goes with qubit-pair settings; any other preparation goes
 * with a Povm of the same dimension.
 */
class ModelContext {
 public:
  ModelContext(Preparation preparation, Measurement measurement);

  static ModelContext singlet(const BlochVector& a, const BlochVector& b);

  /// Qubit prepared along `state`, measured along `axis` (outcomes "+", "-").
  static ModelContext qubit(const BlochVector& state, const BlochVector& axis);

  [[nodiscard]] const Preparation& preparation() const noexcept { return prep_; }
  [[nodiscard]] const Measurement& measurement() const noexcept { return meas_; }

  [[nodiscard]] const StateVector* pure_state() const noexcept { return std::get_if<StateVector>(&prep_); }
  [[nodiscard]] const DensityMatrix* mixed_state() const noexcept { return std::get_if<DensityMatrix>(&prep_); }
  [[nodiscard]] bool is_singlet() const noexcept { return std::holds_alternative<Singlet>(prep_); }
  [[nodiscard]] const Povm* povm() const noexcept { return std::get_if<Povm>(&meas_); }
  [[nodiscard]] const QubitPairSettings* settings() const noexcept { return std::get_if<QubitPairSettings>(&meas_); }

  /// Density matrix of a StateVector or DensityMatrix preparation; throws for the singlet tag.
  [[nodiscard]] DensityMatrix density_matrix() const;

  [[nodiscard]] std::string describe() const;

 private:
  Preparation prep_;
  Measurement meas_;
};

}  // namespace mdhv
