#include "mdhv/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mdhv/errors.hpp"
#include "mdhv/tolerances.hpp"

namespace mdhv {

namespace {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const CMatrix& m) { return max_abs(m - m.adjoint()) <= tol::kStructural; }

double min_eigenvalue(const CMatrix& m) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) throw InvariantError("StateVector: dimension must be at least 2");
  if (!(std::abs(amps_.norm() - 1.0) <= tol::kStructural)) {
    throw InvariantError("StateVector: amplitudes are not normalized");
  }
}

StateVector StateVector::normalized(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 1e-12)) throw InvariantError("StateVector: cannot normalize a zero vector");
  return StateVector(amplitudes / n);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw LabelError("StateVector::basis: index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

CMatrix StateVector::projector() const { return amps_ * amps_.adjoint(); }

DensityMatrix StateVector::density() const { return DensityMatrix(projector()); }

StateVector StateVector::tensor(const StateVector& other) const {
  CVector out(amps_.size() * other.amps_.size());
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    out.segment(i * other.amps_.size(), other.amps_.size()) = amps_(i) * other.amps_;
  }
  return StateVector::normalized(std::move(out));
}

Complex StateVector::inner(const StateVector& other) const {
  if (dim() != other.dim()) throw DimensionError("inner product of states of different dimension");
  return amps_.dot(other.amps_);  // conjugates the left operand
}

double overlap_sq(const StateVector& a, const StateVector& b) { return std::norm(a.inner(b)); }

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2) throw InvariantError("DensityMatrix: must be square, dim >= 2");
  if (!is_hermitian(m_)) throw InvariantError("DensityMatrix: not Hermitian");
  if (!(std::abs(m_.trace() - Complex(1.0)) <= tol::kStructural)) {
    throw InvariantError("DensityMatrix: trace is not 1");
  }
  if (min_eigenvalue(m_) < -tol::kStructural) throw InvariantError("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::from_mixture(std::span<const std::pair<double, StateVector>> mixture) {
  if (mixture.empty()) throw InvariantError("mixture is empty");
  const std::size_t d = mixture.front().second.dim();
  double total = 0.0;
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (const auto& [w, psi] : mixture) {
    if (psi.dim() != d) throw DimensionError("mixture components have different dimensions");
    if (w < 0.0) throw InvariantError("mixture weight is negative");
    total += w;
    rho += w * psi.projector();
  }
  if (!(std::abs(total - 1.0) <= tol::kStructural)) throw InvariantError("mixture weights do not sum to 1");
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const { return DensityMatrix(kron(m_, other.m_)); }

// ---------------------------------------------------------------------------
// Povm

Povm::Povm(std::vector<Element> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvariantError("Povm: no elements");
  dim_ = static_cast<std::size_t>(elements_.front().op.rows());
  if (dim_ < 2) throw InvariantError("Povm: dimension must be at least 2");

  std::set<std::string> seen;
  const auto n = static_cast<Eigen::Index>(dim_);
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& e : elements_) {
    if (e.op.rows() != n || e.op.cols() != n) throw DimensionError("Povm: element '" + e.label + "' has wrong shape");
    if (!seen.insert(e.label).second) throw InvariantError("Povm: duplicate label '" + e.label + "'");
    if (!is_hermitian(e.op)) throw InvariantError("Povm: element '" + e.label + "' is not Hermitian");
    if (min_eigenvalue(e.op) < -tol::kStructural) throw InvariantError("Povm: element '" + e.label + "' is not PSD");
    sum += e.op;
  }
  if (max_abs(sum - CMatrix::Identity(n, n)) > tol::kStructural) {
    throw InvariantError("Povm: elements do not sum to the identity");
  }

  projective_ = elements_.size() == dim_;
  for (std::size_t i = 0; projective_ && i < elements_.size(); ++i) {
    const CMatrix& p = elements_[i].op;
    projective_ = max_abs(p * p - p) <= tol::kStructural && std::abs(p.trace() - Complex(1.0)) <= tol::kStructural;
    for (std::size_t j = i + 1; projective_ && j < elements_.size(); ++j) {
      projective_ = max_abs(p * elements_[j].op) <= tol::kStructural;
    }
  }
}

Povm Povm::computational(std::size_t dim) {
  std::vector<std::pair<std::string, StateVector>> kets;
  for (std::size_t i = 0; i < dim; ++i) kets.emplace_back(std::to_string(i), StateVector::basis(dim, i));
  return from_kets(std::move(kets));
}

Povm Povm::from_kets(std::vector<std::pair<std::string, StateVector>> kets) {
  std::vector<Element> elements;
  elements.reserve(kets.size());
  for (auto& [label, ket] : kets) elements.push_back(Element{std::move(label), ket.projector()});
  Povm out(std::move(elements));
  if (!out.is_projective()) throw InvariantError("Povm::from_kets: kets are not orthonormal");
  return out;
}

Povm Povm::qubit_axis(const BlochVector& axis) {
  return from_kets({{"+", ket_from_bloch(axis)}, {"-", ket_from_bloch(-axis)}});
}

std::vector<std::string> Povm::labels() const {
  std::vector<std::string> out;
  out.reserve(elements_.size());
  for (const auto& e : elements_) out.push_back(e.label);
  return out;
}

std::size_t Povm::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].label == label) return i;
  }
  throw LabelError("Povm: unknown outcome label '" + std::string(label) + "'");
}

std::size_t Povm::find_projector(const StateVector& ket) const {
  if (ket.dim() != dim_) throw DimensionError("Povm::find_projector: dimension mismatch");
  const CMatrix p = ket.projector();
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (max_abs(elements_[i].op - p) <= tol::kStructural) return i;
  }
  return elements_.size();
}

Povm Povm::tensor(const Povm& other) const {
  std::vector<Element> out;
  out.reserve(size() * other.size());
  for (const auto& a : elements_) {
    for (const auto& b : other.elements_) out.push_back(Element{a.label + b.label, kron(a.op, b.op)});
  }
  return Povm(std::move(out));
}

// ---------------------------------------------------------------------------
// ProjectiveBasis

StateVector ket_from_projector(const CMatrix& projector) {
  Eigen::Index col = 0;
  projector.colwise().norm().maxCoeff(&col);
  return StateVector::normalized(projector.col(col));
}

ProjectiveBasis::ProjectiveBasis(Povm povm) : povm_(std::move(povm)) {
  if (!povm_.is_projective()) throw InvariantError("ProjectiveBasis: elements are not orthonormal rank-1 projectors");
  kets_.reserve(povm_.size());
  for (const auto& e : povm_.elements()) kets_.push_back(ket_from_projector(e.op));
}

ProjectiveBasis ProjectiveBasis::from_kets(std::vector<std::pair<std::string, StateVector>> kets) {
  return ProjectiveBasis(Povm::from_kets(std::move(kets)));
}

// ---------------------------------------------------------------------------
// Born rule

double born_probability(const DensityMatrix& prep, const Povm& m, std::size_t index) {
  if (prep.dim() != m.dim()) throw DimensionError("born_probability: preparation and measurement dimensions differ");
  if (index >= m.size()) throw LabelError("born_probability: outcome index out of range");
  const double p = (prep.matrix() * m[index].op).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

double born_probability(const DensityMatrix& prep, const Povm& m, std::string_view label) {
  return born_probability(prep, m, m.index_of(label));
}

double born_probability(const StateVector& prep, const Povm& m, std::size_t index) {
  if (prep.dim() != m.dim()) throw DimensionError("born_probability: preparation and measurement dimensions differ");
  if (index >= m.size()) throw LabelError("born_probability: outcome index out of range");
  const CVector& a = prep.amplitudes();
  return std::clamp(a.dot(m[index].op * a).real(), 0.0, 1.0);
}

std::vector<double> born_probabilities(const DensityMatrix& prep, const Povm& m) {
  std::vector<double> out(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) out[k] = born_probability(prep, m, k);
  return out;
}

std::vector<double> born_probabilities(const StateVector& prep, const Povm& m) {
  std::vector<double> out(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) out[k] = born_probability(prep, m, k);
  return out;
}

// ---------------------------------------------------------------------------
// Qubit helpers

StateVector ket_from_bloch(const BlochVector& v) {
  const double theta = std::atan2(std::hypot(v.x(), v.y()), v.z());
  const double phi = std::atan2(v.y(), v.x());
  CVector amps(2);
  amps << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
  return StateVector::normalized(std::move(amps));
}

BlochVector bloch_from_ket(const StateVector& s) {
  if (s.dim() != 2) throw DimensionError("bloch_from_ket: state is not a qubit");
  const Complex c = std::conj(s[0]) * s[1];
  return BlochVector::from_components(2.0 * c.real(), 2.0 * c.imag(), std::norm(s[0]) - std::norm(s[1]));
}

BlochVector bloch_from_projector(const CMatrix& projector) {
  if (projector.rows() != 2 || projector.cols() != 2) throw DimensionError("bloch_from_projector: not a qubit operator");
  const Complex p01 = projector(0, 1);
  return BlochVector::from_components(2.0 * p01.real(), -2.0 * p01.imag(),
                                      projector(0, 0).real() - projector(1, 1).real());
}

StateVector singlet_state() {
  CVector amps = CVector::Zero(4);
  amps(1) = 1.0;
  amps(2) = -1.0;
  return StateVector::normalized(std::move(amps));
}

double singlet_outcome_probability(const BlochVector& a, const BlochVector& b, int i, int j) {
  if ((i != 1 && i != -1) || (j != 1 && j != -1)) throw LabelError("singlet outcome must be +1 or -1");
  return (1.0 - static_cast<double>(i * j) * a.dot(b)) / 4.0;
}

double singlet_expectation(const BlochVector& a, const BlochVector& b) { return -a.dot(b); }

CMatrix partial_trace_second(const CMatrix& m, std::size_t dim_a, std::size_t dim_b) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  if (m.rows() != da * db || m.cols() != da * db) throw DimensionError("partial_trace_second: shape mismatch");
  CMatrix out = CMatrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    }
  }
  return out;
}

CMatrix partial_trace_first(const CMatrix& m, std::size_t dim_a, std::size_t dim_b) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  if (m.rows() != da * db || m.cols() != da * db) throw DimensionError("partial_trace_first: shape mismatch");
  CMatrix out = CMatrix::Zero(db, db);
  for (Eigen::Index i = 0; i < db; ++i) {
    for (Eigen::Index j = 0; j < db; ++j) {
      for (Eigen::Index k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
    }
  }
  return out;
}

CMatrix spin_projector(const BlochVector& axis, int i) {
  if (i != 1 && i != -1) throw LabelError("spin outcome must be +1 or -1");
  return ket_from_bloch(i == 1 ? axis : -axis).projector();
}

}  // namespace mdhv
