#include <cmath>

#include "doctest.h"
#include "mdhv/errors.hpp"
#include "mdhv/experiment.hpp"
#include "mdhv/models.hpp"
#include "mdhv/random.hpp"

using namespace mdhv;

TEST_CASE("streams are pure functions of seed and index") {
  Stream a(5, 3);
  Stream b(5, 3);
  Stream c(5, 4);
  bool differs = false;
  for (int n = 0; n < 100; ++n) {
    const auto x = a();
    CHECK(x == b());
    differs = differs || x != c();
  }
  CHECK(differs);
  CHECK(Stream(5, 0).derive(9)() == Stream(5, 0).derive(9)());
}

TEST_CASE("uniform draws lie in [0, 1) and have the right mean") {
  Stream rng(6);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK_FALSE((u < 0.0 || u >= 1.0));
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("categorical follows its weights") {
  Stream rng(7);
  const std::vector<double> w{1.0, 0.0, 3.0};
  std::array<int, 3> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[rng.categorical(w)];
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[2] / double(n) - 0.75) < 5.0 * std::sqrt(0.75 * 0.25 / n));
}

TEST_CASE("results do not depend on the thread count") {
  const auto m = make_model("hall");
  const auto ctx = ModelContext::singlet(BlochVector::z_axis(), BlochVector::from_angles(1.0, 0.5));
  const auto one = run_experiment(*m, ctx, 300000, 42, ExecutionOptions{1, 4096});
  const auto four = run_experiment(*m, ctx, 300000, 42, ExecutionOptions{4, 4096});
  CHECK(one.counts == four.counts);
  const auto other_seed = run_experiment(*m, ctx, 300000, 43, ExecutionOptions{1, 4096});
  CHECK(one.counts != other_seed.counts);
}

TEST_CASE("run_blocks returns partials in block order") {
  const auto parts = run_blocks<std::uint64_t>(10, 1, ExecutionOptions{3, 3},
                                               [](std::uint64_t count, Stream&) { return count; });
  CHECK(parts == std::vector<std::uint64_t>{3, 3, 3, 1});
}

TEST_CASE("zero shots is an error") {
  const auto m = make_model("gbrans");
  const ModelContext ctx(StateVector::basis(2, 0), Povm::computational(2));
  CHECK_THROWS_AS((void)run_experiment(*m, ctx, 0, 1), InvariantError);
}

TEST_CASE("report bookkeeping") {
  const auto m = make_model("gbrans");
  Stream rng(8);
  const ModelContext ctx(random_state(3, rng), Povm::computational(3));
  const auto r = run_experiment(*m, ctx, 50000, 9);
  std::uint64_t total = 0;
  for (auto c : r.counts) total += c;
  CHECK(total == 50000);
  CHECK(r.estimate("1") == doctest::Approx(static_cast<double>(r.counts[1]) / 50000));
  CHECK_THROWS_AS((void)r.estimate("7"), LabelError);
  CHECK(r.max_z_score() < 5.0);

  const auto j = r.to_json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"shots", "seed", "counts", "estimates", "stderr", "born_reference"});
}

TEST_CASE("pair correlation of a perfectly anticorrelated report") {
  const auto m = make_model("brans");
  const auto r = run_experiment(*m, ModelContext::singlet(BlochVector::z_axis(), BlochVector::z_axis()), 1000, 3);
  const Correlation c = pair_correlation(r);
  CHECK(c.value == -1.0);
  CHECK(c.stderr_ == 0.0);
}
