#include "mdhv/random.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>
#include <string>

#include "mdhv/sphere.hpp"

namespace mdhv {

double gaussian(Stream& rng) noexcept {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

BlochVector random_bloch(Stream& rng) { return sphere::uniform(rng); }

StateVector random_state(std::size_t dim, Stream& rng) {
  CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gaussian(rng), gaussian(rng));
  return StateVector::normalized(v);
}

namespace {

Povm from_columns(const CMatrix& q) {
  std::vector<std::pair<std::string, StateVector>> kets;
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    kets.emplace_back(std::to_string(i), StateVector::normalized(q.col(i)));
  }
  return Povm::from_kets(std::move(kets));
}

}  // namespace

Povm random_basis(std::size_t dim, Stream& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(gaussian(rng), gaussian(rng));
  }
  const CMatrix q = Eigen::HouseholderQR<CMatrix>(g).householderQ();
  return from_columns(q);
}

Povm basis_containing(const StateVector& psi, Stream& rng) {
  const auto d = static_cast<Eigen::Index>(psi.dim());
  CMatrix g(d, d);
  g.col(0) = psi.amplitudes();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 1; j < d; ++j) g(i, j) = Complex(gaussian(rng), gaussian(rng));
  }
  CMatrix q = Eigen::HouseholderQR<CMatrix>(g).householderQ();
  q.col(0) = psi.amplitudes();  // Householder fixes the span, not the phase; keep psi itself
  return from_columns(q);
}

bool is_qubit_model(const HiddenVariableModel& model) noexcept {
  const auto n = model.name();
  return n == "ks1" || n == "ks2" || n == "bellmermin";
}

ModelContext random_context(const HiddenVariableModel& model, std::size_t dim, Stream& rng) {
  if (model.is_bipartite()) return ModelContext::singlet(random_bloch(rng), random_bloch(rng));
  const std::size_t d = is_qubit_model(model) ? 2 : dim;
  return ModelContext(random_state(d, rng), random_basis(d, rng));
}

}  // namespace mdhv
