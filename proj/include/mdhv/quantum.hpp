#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mdhv/bloch.hpp"

namespace mdhv {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

class DensityMatrix;

/// Normalized pure state in dimension >= 2.
class StateVector {
 public:
  /// Takes amplitudes that are already normalized (within 1e-9).
  explicit StateVector(CVector amplitudes);

  /// Rescales the amplitudes to unit norm first.
  static StateVector normalized(CVector amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  [[nodiscard]] const CVector& amplitudes() const noexcept { return amps_; }
  [[nodiscard]] Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  [[nodiscard]] CMatrix projector() const;
  [[nodiscard]] DensityMatrix density() const;
  [[nodiscard]] StateVector tensor(const StateVector& other) const;

  /// <this|other>
  [[nodiscard]] Complex inner(const StateVector& other) const;

 private:
  CVector amps_;
};

/// |<a|b>|^2. The only notion of state equality used anywhere (no phase fixing).
[[nodiscard]] double overlap_sq(const StateVector& a, const StateVector& b);

using Mixture = std::vector<std::pair<double, StateVector>>;

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix from_mixture(std::span<const std::pair<double, StateVector>> mixture);
  static DensityMatrix maximally_mixed(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  [[nodiscard]] const CMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] DensityMatrix tensor(const DensityMatrix& other) const;

 private:
  CMatrix m_;
};

/**
 * Measurement as an ordered list of labeled positive operators summing to the
 * identity. Validity is checked once here; evaluation paths assume it.
 */
class Povm {
 public:
  struct Element {
    std::string label;
    CMatrix op;
  };

  explicit Povm(std::vector<Element> elements);

  /// Computational basis with labels "0", "1", ...
  static Povm computational(std::size_t dim);

  /// Rank-1 projective measurement onto orthonormal kets.
  static Povm from_kets(std::vector<std::pair<std::string, StateVector>> kets);

  /// Spin measurement along `axis`: labels "+" (|axis>) and "-" (|-axis>).
  static Povm qubit_axis(const BlochVector& axis);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
  [[nodiscard]] const Element& operator[](std::size_t i) const { return elements_.at(i); }
  [[nodiscard]] const std::vector<Element>& elements() const noexcept { return elements_; }
  [[nodiscard]] std::vector<std::string> labels() const;

  /// Index of `label`; throws LabelError when absent.
  [[nodiscard]] std::size_t index_of(std::string_view label) const;

  /// True when every element is a rank-1 projector and they are mutually orthogonal.
  [[nodiscard]] bool is_projective() const noexcept { return projective_; }

  /// Index of the element equal to |ket><ket| (within 1e-9), or size() when none.
  [[nodiscard]] std::size_t find_projector(const StateVector& ket) const;

  /// Product measurement; label of (i, j) is label_i + label_j.
  [[nodiscard]] Povm tensor(const Povm& other) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Element> elements_;
  bool projective_ = false;
};

/// A Povm of orthonormal rank-1 projectors, with the kets recovered.
class ProjectiveBasis {
 public:
  explicit ProjectiveBasis(Povm povm);
  static ProjectiveBasis from_kets(std::vector<std::pair<std::string, StateVector>> kets);

  [[nodiscard]] const Povm& povm() const noexcept { return povm_; }
  [[nodiscard]] std::size_t size() const noexcept { return kets_.size(); }
  /// A representative ket of element i (phase arbitrary).
  [[nodiscard]] const StateVector& ket(std::size_t i) const { return kets_.at(i); }

 private:
  Povm povm_;
  std::vector<StateVector> kets_;
};

/// Extracts a unit vector spanning the range of a rank-1 projector.
[[nodiscard]] StateVector ket_from_projector(const CMatrix& projector);

/// tr(rho E_k) clamped to [0, 1].
[[nodiscard]] double born_probability(const DensityMatrix& prep, const Povm& m, std::string_view label);
[[nodiscard]] double born_probability(const DensityMatrix& prep, const Povm& m, std::size_t index);
[[nodiscard]] double born_probability(const StateVector& prep, const Povm& m, std::size_t index);
[[nodiscard]] std::vector<double> born_probabilities(const DensityMatrix& prep, const Povm& m);
[[nodiscard]] std::vector<double> born_probabilities(const StateVector& prep, const Povm& m);

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
[[nodiscard]] StateVector ket_from_bloch(const BlochVector& v);
[[nodiscard]] BlochVector bloch_from_ket(const StateVector& s);
/// Bloch vector r of a qubit rank-1 projector P = (I + r.sigma)/2.
[[nodiscard]] BlochVector bloch_from_projector(const CMatrix& projector);

/// (|01> - |10>)/sqrt(2).
[[nodiscard]] StateVector singlet_state();

/// Probability that spin measurements along a and b on the singlet give (i, j), i, j in {+1, -1}.
[[nodiscard]] double singlet_outcome_probability(const BlochVector& a, const BlochVector& b, int i, int j);

/// <sigma.a (x) sigma.b> on the singlet, i.e. -a.b.
[[nodiscard]] double singlet_expectation(const BlochVector& a, const BlochVector& b);

/// tr_B of a (dA*dB)-dimensional operator.
[[nodiscard]] CMatrix partial_trace_second(const CMatrix& m, std::size_t dim_a, std::size_t dim_b);
/// tr_A of a (dA*dB)-dimensional operator.
[[nodiscard]] CMatrix partial_trace_first(const CMatrix& m, std::size_t dim_a, std::size_t dim_b);

/// Projector onto the eigenvalue-i eigenstate of sigma.axis (i in {+1, -1}).
[[nodiscard]] CMatrix spin_projector(const BlochVector& axis, int i);

}  // namespace mdhv
