#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mdhv/errors.hpp"
#include "mdhv/quantum.hpp"
#include "mdhv/random.hpp"
#include "mdhv/tolerances.hpp"
#include "oracles.hpp"

using namespace mdhv;

TEST_CASE("step and sign put zero on the positive side") {
  CHECK(step(0.0) == 1.0);
  CHECK(step(-1e-300) == 0.0);
  CHECK(sign(0.0) == 1);
  CHECK(sign(-0.0) == 1);
  CHECK(sign(-2.0) == -1);
}

TEST_CASE("Bloch vectors must be unit length") {
  CHECK_THROWS_AS(BlochVector::unit(1.0, 1.0, 0.0), InvariantError);
  CHECK_THROWS_AS(BlochVector::from_components(0.0, 0.0, 0.0), InvariantError);
  CHECK(BlochVector::from_components(0.0, 3.0, 4.0).z() == doctest::Approx(0.8));
  const auto v = BlochVector::from_angles(std::numbers::pi / 2, 0.0);
  CHECK(v.x() == doctest::Approx(1.0));
  CHECK(v.dot(BlochVector::z_axis()) == doctest::Approx(0.0));
}

TEST_CASE("ket and Bloch vector round trip") {
  Stream rng(11);
  for (int n = 0; n < 200; ++n) {
    const BlochVector v = random_bloch(rng);
    const BlochVector back = bloch_from_ket(ket_from_bloch(v));
    CHECK(v.dot(back) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Born probabilities of random states in random bases sum to one") {
  Stream rng(12);
  for (std::size_t d = 2; d <= 6; ++d) {
    for (int n = 0; n < 20; ++n) {
      const StateVector psi = random_state(d, rng);
      const Povm m = random_basis(d, rng);
      CHECK(m.is_projective());
      double total = 0.0;
      for (std::size_t k = 0; k < m.size(); ++k) {
        const double p = born_probability(psi, m, k);
        CHECK(p >= 0.0);
        CHECK(p == doctest::Approx(oracle::born(psi.amplitudes(), m[k].op)).epsilon(1e-12));
        total += p;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(tol::kArithmetic));
    }
  }
}

TEST_CASE("singlet outcome probabilities match the 4x4 projector oracle") {
  Stream rng(13);
  for (int n = 0; n < 100; ++n) {
    const BlochVector a = random_bloch(rng);
    const BlochVector b = random_bloch(rng);
    double expectation = 0.0;
    for (int i : {1, -1}) {
      for (int j : {1, -1}) {
        const double p = singlet_outcome_probability(a, b, i, j);
        CHECK(p == doctest::Approx(oracle::singlet_joint(a.components(), b.components(), i, j)).epsilon(1e-12));
        expectation += i * j * p;
      }
    }
    CHECK(singlet_expectation(a, b) == doctest::Approx(-a.dot(b)).epsilon(1e-12));
    CHECK(expectation == doctest::Approx(-a.dot(b)).epsilon(1e-12));
  }
}

TEST_CASE("reduced singlet is maximally mixed") {
  const CMatrix rho = singlet_state().projector();
  const CMatrix a = partial_trace_second(rho, 2, 2);
  const CMatrix b = partial_trace_first(rho, 2, 2);
  CHECK((a - CMatrix::Identity(2, 2) / 2.0).norm() < tol::kStructural);
  CHECK((b - CMatrix::Identity(2, 2) / 2.0).norm() < tol::kStructural);
}

TEST_CASE("Povm validation") {
  SUBCASE("elements must sum to the identity") {
    std::vector<Povm::Element> els{{"0", StateVector::basis(2, 0).projector()}};
    CHECK_THROWS_AS(Povm{els}, InvariantError);
  }
  SUBCASE("labels are unique and looked up exactly") {
    const Povm m = Povm::computational(3);
    CHECK(m.index_of("2") == 2);
    CHECK_THROWS_AS((void)m.index_of("3"), LabelError);
  }
  SUBCASE("dimension mismatch is reported") {
    CHECK_THROWS_AS((void)born_probability(StateVector::basis(3, 0), Povm::computational(2), std::size_t{0}),
                    DimensionError);
  }
  SUBCASE("product labels concatenate") {
    const Povm m = Povm::computational(2).tensor(Povm::qubit_axis(BlochVector::x_axis()));
    CHECK(m.dim() == 4);
    CHECK(m.labels() == std::vector<std::string>{"0+", "0-", "1+", "1-"});
  }
}

TEST_CASE("non-normalized amplitudes are rejected") {
  CHECK_THROWS_AS(StateVector((CVector(2) << 1.0, 1.0).finished()), InvariantError);
  const StateVector s = StateVector::normalized((CVector(2) << 1.0, 1.0).finished());
  CHECK(std::norm(s[0]) == doctest::Approx(0.5));
}

TEST_CASE("find_projector ignores global phase") {
  const StateVector plus = ket_from_bloch(BlochVector::x_axis());
  const StateVector phased((plus.amplitudes() * Complex(0.0, 1.0)).eval());
  const Povm m = Povm::qubit_axis(BlochVector::x_axis());
  CHECK(m.find_projector(phased) == 0);
  CHECK(m.find_projector(StateVector::basis(2, 0)) == m.size());
}
