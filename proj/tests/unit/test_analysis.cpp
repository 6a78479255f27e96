#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mdhv/analysis.hpp"
#include "mdhv/errors.hpp"
#include "mdhv/models.hpp"
#include "mdhv/random.hpp"
#include "noisy_model.hpp"
#include "oracles.hpp"

using namespace mdhv;

namespace {

const double kR = 1.0 / std::numbers::sqrt2;

StateVector ket(Complex a, Complex b) { return StateVector((CVector(2) << a, b).finished()); }
StateVector ket4(Complex a, Complex b, Complex c, Complex d) {
  return StateVector::normalized((CVector(4) << a, b, c, d).finished());
}

const StateVector kZero = StateVector::basis(2, 0);
const StateVector kOne = StateVector::basis(2, 1);
const StateVector kPlus = ket(kR, kR);
const StateVector kMinus = ket(kR, -kR);

Povm qubit_x() { return Povm::from_kets({{"+", kPlus}, {"-", kMinus}}); }
Povm qubit_y() {
  return Povm::from_kets({{"+i", ket(kR, Complex(0, kR))}, {"-i", ket(kR, Complex(0, -kR))}});
}

Povm mixed_basis() {
  return Povm::from_kets(
      {{"00", ket4(1, 0, 0, 0)}, {"01", ket4(0, 1, 0, 0)}, {"1+", ket4(0, 0, 1, 1)}, {"1-", ket4(0, 0, 1, -1)}});
}

}  // namespace

TEST_CASE("generalized Brans is maximally epistemic (analytic path)") {
  const auto m = make_model("gbrans");
  Stream rng(31);
  for (std::size_t d = 2; d <= 5; ++d) {
    for (int n = 0; n < 20; ++n) {
      const StateVector psi = random_state(d, rng);
      const StateVector phi = random_state(d, rng);
      const auto r = degree_of_epistemicity(*m, psi, phi, basis_containing(phi, rng), 0, 1);
      CHECK(r.analytic);
      CHECK(r.omega == 1.0);
      CHECK(r.classification == OverlapClass::kOverlapping);
    }
  }
}

TEST_CASE("epistemicity Monte Carlo path agrees with the analytic one") {
  const auto m = make_model("gbrans");
  Stream rng(32);
  const StateVector psi = random_state(3, rng);
  const StateVector phi = random_state(3, rng);
  const Povm basis = basis_containing(phi, rng);
  const auto exact = degree_of_epistemicity(*m, psi, phi, basis, 0, 1);
  const auto mc = degree_of_epistemicity(*m, psi, phi, basis, 200000, 2, {}, OverlapMethod::kMonteCarlo);
  CHECK_FALSE(mc.analytic);
  CHECK(std::abs(mc.mass_psi_in_phi_support - exact.mass_psi_in_phi_support) < 5.0 * mc.mc_stderr);
}

TEST_CASE("epistemicity needs phi in the measurement") {
  const auto m = make_model("gbrans");
  CHECK_THROWS_AS((void)degree_of_epistemicity(*m, kZero, kPlus, Povm::computational(2), 10, 1), ContextError);
}

TEST_CASE("orthogonal states have disjoint supports") {
  for (auto name : {"gbrans", "interval", "ks1", "ks2", "bellmermin"}) {
    CAPTURE(name);
    const auto m = make_model(name);
    const auto r = degree_of_epistemicity(*m, kZero, kOne, Povm::computational(2), 20000, 3);
    CHECK(r.mass_psi_in_phi_support == 0.0);
    CHECK(r.classification == OverlapClass::kDisjoint);
    CHECK(std::isnan(r.omega));
  }
}

TEST_CASE("classical overlap of generalized Brans is the sum of pointwise minima") {
  const auto m = make_model("gbrans");
  Stream rng(33);
  const StateVector psi = random_state(3, rng);
  const StateVector phi = random_state(3, rng);
  const Povm basis = random_basis(3, rng);
  double expected = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    expected += std::min(oracle::born(psi.amplitudes(), basis[k].op), oracle::born(phi.amplitudes(), basis[k].op));
  }
  CHECK(classical_overlap(*m, psi, phi, basis, 0, 1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(quantum_overlap(kZero, kZero) == doctest::Approx(1.0));
  CHECK(quantum_overlap(kZero, kOne) == 0.0);
}

TEST_CASE("randomness and reciprocity") {
  SUBCASE("deterministic model has neither") {
    const auto m = make_model("gbrans");
    const auto r = randomness(*m, kPlus, Povm::computational(2), "0", 10000, 1);
    CHECK(r.value == 0.0);
    const auto rc = reciprocity_check(*m, kPlus, qubit_x(), 10000, 1);
    CHECK(rc.violation_mass == 0.0);
    CHECK(rc.reciprocal);
  }
  SUBCASE("depolarized response") {
    const testing_support::NoisyBrans m(0.1);
    const auto r = randomness(m, kZero, Povm::computational(2), "0", 10000, 1);
    CHECK(r.value == doctest::Approx(0.95));
    const auto rc = reciprocity_check(m, kZero, Povm::computational(2), 10000, 1);
    CHECK(rc.violation_mass == doctest::Approx(1.0));
    CHECK_FALSE(rc.reciprocal);
  }
}

TEST_CASE("preparation independence") {
  const auto m = make_model("gbrans");
  SUBCASE("mixed basis instance") {
    const PiReport r = preparation_independence_residual(*m, {kPlus, kZero}, mixed_basis());
    CHECK(r.max_residual == doctest::Approx(oracle::kMixedBasisPiResidual).epsilon(1e-12));
    CHECK(r.joint[1] == 0.0);
  }
  SUBCASE("product bases give zero") {
    Stream rng(34);
    for (int n = 0; n < 10; ++n) {
      const StateVector a = random_state(2, rng);
      const StateVector b = random_state(3, rng);
      const Povm basis = random_basis(2, rng).tensor(random_basis(3, rng));
      CHECK(preparation_independence_residual(*m, {a, b}, basis).max_residual < 1e-12);
    }
  }
  SUBCASE("state overload factors product states and refuses entangled ones") {
    const PiReport r = preparation_independence_residual(*m, kPlus.tensor(kZero), {2, 2}, mixed_basis());
    CHECK(r.max_residual == doctest::Approx(0.125).epsilon(1e-12));
    CHECK_FALSE(factorize(singlet_state(), {2, 2}).has_value());
    CHECK_THROWS_AS((void)preparation_independence_residual(*m, singlet_state(), {2, 2}, mixed_basis()),
                    InvariantError);
  }
  SUBCASE("measurement of the wrong size") {
    CHECK_THROWS_AS((void)preparation_independence_residual(*m, {kPlus, kZero}, Povm::computational(3)),
                    InvariantError);
  }
}

TEST_CASE("compatibility audit") {
  const auto m = make_model("gbrans");
  const Povm z = Povm::computational(2);
  SUBCASE("Z(x)Z with |0>, |+>") {
    const auto r = compatibility_audit(*m, kZero, kPlus, z.tensor(z), std::make_pair(z, z));
    CHECK(r.holds[0]);
    CHECK_FALSE(r.holds[1]);
    CHECK_FALSE(r.holds[2]);
    CHECK(r.holds[3]);
    REQUIRE(r.locally_compatible.has_value());
  }
  SUBCASE("Z(x)X with |0>, |1>") {
    const auto r = compatibility_audit(*m, kZero, kOne, z.tensor(qubit_x()));
    CHECK(r.compatible);
  }
  SUBCASE("Y(x)Y with |0>, |+>") {
    const auto r = compatibility_audit(*m, kZero, kPlus, qubit_y().tensor(qubit_y()));
    CHECK(r.compatible);
    CHECK(r.common_support.size() == 4);
  }
  SUBCASE("entangled basis that excludes all four products") {
    const Povm pbr = Povm::from_kets(
        {{"1", ket4(0, 1, 1, 0)}, {"2", ket4(1, -1, 1, 1)}, {"3", ket4(1, 1, -1, 1)}, {"4", ket4(1, 0, 0, -1)}});
    for (const auto& a : {kZero, kPlus}) {
      for (const auto& b : {kZero, kPlus}) {
        const auto p = born_probabilities(a.tensor(b), pbr);
        CHECK(std::count_if(p.begin(), p.end(), [](double x) { return x < 1e-12; }) == 1);
      }
    }
    const auto r = compatibility_audit(*m, kZero, kPlus, pbr);
    CHECK(r.common_support.empty());
    CHECK_FALSE(r.compatible);
  }
  SUBCASE("singlet models have no enumerable joint space") {
    CHECK_THROWS_AS((void)compatibility_audit(*make_model("hall"), kZero, kPlus, z.tensor(z)), Error);
  }
}

TEST_CASE("supports refuses the singlet") {
  CHECK_THROWS_AS((void)supports(DiscreteIndex{0}, Singlet{}, Povm::computational(2), *make_model("gbrans")),
                  UnsupportedError);
}

TEST_CASE("remote-setting dependence of a single marginal") {
  const BlochVector z = BlochVector::z_axis();
  SUBCASE("Brans is exactly independent") {
    Stream rng(35);
    for (int n = 0; n < 10; ++n) {
      const auto r = setting_marginal_dependence(*make_model("brans"), 1, random_bloch(rng), random_bloch(rng),
                                                 random_bloch(rng), 1000, 1);
      CHECK(r.exact);
      CHECK(r.tv == 0.0);
    }
  }
  SUBCASE("Hall depends on the remote setting at generic angles") {
    for (double deg : {30.0, 45.0, 60.0, 120.0}) {
      CAPTURE(deg);
      const double theta = deg * std::numbers::pi / 180.0;
      const auto r = setting_marginal_dependence(*make_model("hall"), 2, z, BlochVector::from_angles(theta, 0.0),
                                                 BlochVector::x_axis(), 400000, 2);
      CHECK(std::abs(r.tv - oracle::hall_tv_against_uniform(theta)) < 5.0 * r.stderr_ + 1e-3);
    }
  }
  SUBCASE("Hall marginal is uniform at 0 and 90 degrees") {
    const auto r = setting_marginal_dependence(*make_model("hall"), 2, z, z, BlochVector::x_axis(), 100000, 3);
    CHECK(r.tv < 1e-12);
  }
  SUBCASE("other models are not two-party") {
    CHECK_THROWS_AS((void)setting_marginal_dependence(*make_model("ks1"), 1, z, z, z, 100, 1), UnsupportedError);
  }
}

TEST_CASE("product measurements factorize") {
  Stream rng(36);
  const auto m = make_model("gbrans");
  const double dev = product_measurement_factorization_test(random_state(2, rng), random_state(3, rng),
                                                            random_basis(2, rng), random_basis(3, rng), *m, 200000, 4);
  CHECK(dev < 0.01);
}

TEST_CASE("report JSON carries the headline fields") {
  const auto m = make_model("gbrans");
  const auto r = degree_of_epistemicity(*m, kZero, kPlus, qubit_x(), 0, 1);
  const auto j = r.to_json();
  CHECK(j.contains("omega"));
  CHECK(j.at("classification") == "overlapping");
}
