#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "mdhv/errors.hpp"
#include "mdhv/models.hpp"
#include "mdhv/random.hpp"
#include "oracles.hpp"

using namespace mdhv;

namespace {

std::unique_ptr<HiddenVariableModel> model(std::string_view name) {
  auto m = make_model(name);
  REQUIRE(m != nullptr);
  return m;
}

/// sum over the quadrature of density * response, per outcome.
std::vector<double> quadrature_outcomes(const HiddenVariableModel& m, const ModelContext& ctx, std::size_t resolution,
                                        std::uint64_t seed, double* total_mass = nullptr) {
  const auto bound = m.bind(ctx);
  Stream rng(seed);
  std::vector<double> out(bound->outcome_count(), 0.0);
  std::vector<double> resp(bound->outcome_count());
  double mass = 0.0;
  for (const auto& wp : m.quadrature(std::span(&ctx, 1), resolution, rng)) {
    const double f = bound->density(wp.point);
    if (f == 0.0) continue;
    mass += wp.weight * f;
    bound->respond(wp.point, resp);
    for (std::size_t k = 0; k < resp.size(); ++k) out[k] += wp.weight * f * resp[k];
  }
  if (total_mass != nullptr) *total_mass = mass;
  return out;
}

}  // namespace

TEST_CASE("registry lists every model and rejects unknown names") {
  const auto names = model_names();
  CHECK(names.size() == 7);
  for (auto n : names) CHECK(model(n)->name() == n);
  CHECK(make_model("nope") == nullptr);
}

TEST_CASE("every model: samples are in the support and responses are distributions") {
  Stream ctx_rng(21);
  for (auto name : model_names()) {
    CAPTURE(name);
    const auto m = model(name);
    for (int c = 0; c < 5; ++c) {
      const ModelContext ctx = random_context(*m, 3, ctx_rng);
      const auto bound = m->bind(ctx);
      Stream rng(100 + c);
      std::vector<double> resp(bound->outcome_count());
      for (int n = 0; n < 500; ++n) {
        const OnticPoint lambda = bound->sample(rng);
        CHECK(bound->in_support(lambda));
        bound->respond(lambda, resp);
        double total = 0.0;
        for (double r : resp) {
          CHECK(r >= 0.0);
          CHECK(r <= 1.0);
          if (m->is_deterministic()) CHECK((r == 0.0 || r == 1.0));
          total += r;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("every model: quadrature of density times response reproduces Born") {
  Stream ctx_rng(22);
  for (auto name : model_names()) {
    CAPTURE(name);
    const auto m = model(name);
    const bool finite = m->reference_measure() == ReferenceMeasure::kCounting ||
                        m->reference_measure() == ReferenceMeasure::kLebesgue;
    const double tolerance = finite ? 1e-12 : 1e-2;
    for (int c = 0; c < 4; ++c) {
      const ModelContext ctx = random_context(*m, 4, ctx_rng);
      double mass = 0.0;
      const auto got = quadrature_outcomes(*m, ctx, 200000, 7 + c, &mass);
      CHECK(mass == doctest::Approx(1.0).epsilon(tolerance));
      const auto bound = m->bind(ctx);
      const auto& born = bound->born_reference();
      for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - born[k]) < tolerance);
    }
  }
}

TEST_CASE("enumerable models list exactly the points of positive density") {
  Stream rng(23);
  const auto gb = model("gbrans");
  const StateVector psi = random_state(4, rng);
  const ModelContext ctx(psi, Povm::computational(4));
  const auto points = gb->enumerate(ctx);
  REQUIRE(points.has_value());
  CHECK(points->size() == 4);
  double total = 0.0;
  for (const auto& p : *points) total += gb->density(p, ctx);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("context validation") {
  SUBCASE("qubit models refuse other dimensions") {
    const ModelContext ctx(StateVector::basis(3, 0), Povm::computational(3));
    for (auto name : {"ks1", "ks2", "bellmermin"}) CHECK_THROWS_AS((void)model(name)->bind(ctx), ContextError);
  }
  SUBCASE("singlet models need the singlet") {
    const ModelContext ctx(StateVector::basis(2, 0), Povm::computational(2));
    CHECK_THROWS_AS((void)model("brans")->bind(ctx), ContextError);
    CHECK_THROWS_AS((void)model("hall")->bind(ctx), ContextError);
  }
  SUBCASE("single-system models refuse the singlet") {
    const auto ctx = ModelContext::singlet(BlochVector::z_axis(), BlochVector::x_axis());
    for (auto name : {"gbrans", "interval", "ks1", "ks2", "bellmermin"}) {
      CHECK_THROWS_AS((void)model(name)->bind(ctx), ContextError);
    }
  }
  SUBCASE("a preparation and measurement of different dimension") {
    CHECK_THROWS_AS(ModelContext(StateVector::basis(3, 0), Povm::computational(2)), DimensionError);
  }
}

TEST_CASE("foreign ontic points are rejected") {
  const ModelContext ctx(StateVector::basis(2, 0), Povm::computational(2));
  CHECK_THROWS_AS((void)model("gbrans")->density(SpherePoint{BlochVector::z_axis()}, ctx), UnsupportedError);
}

TEST_CASE("interval model: points carry their preparation") {
  const auto m = model("interval");
  const Povm z = Povm::computational(2);
  const ModelContext zero(StateVector::basis(2, 0), z);
  const ModelContext one(StateVector::basis(2, 1), z);
  Stream rng(24);
  for (int n = 0; n < 200; ++n) {
    const OnticPoint lambda = m->sample(zero, rng);
    CHECK(m->density(lambda, zero) > 0.0);
    CHECK(m->density(lambda, one) == 0.0);
  }
  SUBCASE("the same ray with another phase is the same preparation") {
    const StateVector phased((StateVector::basis(2, 0).amplitudes() * Complex(0.0, 1.0)).eval());
    const OnticPoint lambda = m->sample(zero, rng);
    CHECK(m->density(lambda, ModelContext(phased, z)) > 0.0);
  }
}

TEST_CASE("interval model: bin boundary belongs to the lower bin") {
  const auto m = model("interval");
  const StateVector psi((CVector(2) << 0.6, 0.8).finished());
  const ModelContext ctx(psi, Povm::computational(2));
  const auto bound = m->bind(ctx);
  const double r = std::sqrt(born_probability(psi, Povm::computational(2), std::size_t{0}));
  Stream rng(25);
  auto lambda = bound->sample(rng);
  std::get<IntervalPoint>(lambda).x = r;
  CHECK(bound->respond(lambda)[0] == 1.0);
  std::get<IntervalPoint>(lambda).x = std::nextafter(r, 1.0);
  CHECK(bound->respond(lambda)[1] == 1.0);
}

TEST_CASE("Hall model: aligned settings give the uniform density") {
  const auto m = model("hall");
  const auto ctx = ModelContext::singlet(BlochVector::z_axis(), BlochVector::z_axis());
  const auto bound = m->bind(ctx);
  Stream rng(26);
  for (int n = 0; n < 100; ++n) {
    const OnticPoint lambda = bound->sample(rng);
    CHECK(bound->density(lambda) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
  }
}

TEST_CASE("Hall model: marginal matches the piecewise-constant form") {
  const double theta = std::numbers::pi / 3;
  const QubitPairSettings s{BlochVector::z_axis(), BlochVector::from_angles(theta, 0.0)};
  Stream rng(27);
  for (int n = 0; n < 200; ++n) {
    const BlochVector v = random_bloch(rng);
    const int sgn = sign(v.dot(s.a) * v.dot(s.b));
    const double expected = oracle::hall_relative_density(theta, sgn) / (4.0 * std::numbers::pi);
    CHECK(ModifiedHall::marginal_density(1, v, s) == doctest::Approx(expected));
  }
}

TEST_CASE("Brans model: a single tag's distribution ignores the remote setting") {
  Stream rng(28);
  for (int n = 0; n < 50; ++n) {
    const BlochVector a = random_bloch(rng);
    const QubitPairSettings s1{a, random_bloch(rng)};
    const QubitPairSettings s2{a, random_bloch(rng)};
    for (int i : {1, -1}) {
      CHECK(BransSinglet::marginal_density(1, i, s1) == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(BransSinglet::marginal_density(1, i, s1) == doctest::Approx(BransSinglet::marginal_density(1, i, s2)));
    }
  }
}

TEST_CASE("KS II outcome at v.b = 0 is +b") {
  const auto m = model("ks2");
  const ModelContext ctx = ModelContext::qubit(BlochVector::z_axis(), BlochVector::x_axis());
  const auto r = m->respond(SpherePoint{BlochVector::z_axis()}, ctx);
  CHECK(r[0] == 1.0);
}
