#pragma once

#include <cstddef>

#include "mdhv/bloch.hpp"
#include "mdhv/context.hpp"
#include "mdhv/model.hpp"
#include "mdhv/quantum.hpp"
#include "mdhv/rng.hpp"

namespace mdhv {

/// Standard normal draw (Box-Muller on two uniforms).
[[nodiscard]] double gaussian(Stream& rng) noexcept;

[[nodiscard]] BlochVector random_bloch(Stream& rng);

/// Haar-random pure state.
[[nodiscard]] StateVector random_state(std::size_t dim, Stream& rng);

/// Haar-random orthonormal basis as a projective Povm labeled "0".."dim-1".
[[nodiscard]] Povm random_basis(std::size_t dim, Stream& rng);

/// Orthonormal basis whose first element is |psi><psi| (labels "0".."dim-1"); the rest is random.
[[nodiscard]] Povm basis_containing(const StateVector& psi, Stream& rng);

/// True for models defined on qubits only (ks1, ks2, bellmermin).
[[nodiscard]] bool is_qubit_model(const HiddenVariableModel& model) noexcept;

/**
 * A random valid context for `model`: random singlet settings for the
 * two-party models, otherwise a random pure state with a random basis in
 * dimension `dim` (forced to 2 for qubit models).
 */
[[nodiscard]] ModelContext random_context(const HiddenVariableModel& model, std::size_t dim, Stream& rng);

}  // namespace mdhv
