#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "mdhv/channel.hpp"
#include "mdhv/errors.hpp"
#include "mdhv/random.hpp"

using namespace mdhv;

TEST_CASE("Alice only sends vectors in her hemisphere") {
  Stream rng(41);
  const BlochVector a = random_bloch(rng);
  for (int n = 0; n < 1000; ++n) CHECK(alice_send(a, rng).v.dot(a) >= 0.0);
}

TEST_CASE("Bob's outcome is the sign of lambda.b, with zero counted as +b") {
  const BlochVector b = BlochVector::z_axis();
  CHECK(bob_outcome(SpherePoint{BlochVector::x_axis()}, b) == 1);
  CHECK(bob_outcome(SpherePoint{-b}, b) == -1);
}

TEST_CASE("acceptance and outcome frequencies") {
  Stream rng(42);
  for (int n = 0; n < 5; ++n) {
    const BlochVector a = random_bloch(rng);
    const BlochVector b = random_bloch(rng);
    const auto t = run_channel(a, b, 40000, 100 + n);
    CHECK(t.accepted == 40000);
    CHECK(t.plus + t.minus == t.accepted);
    const double p = (1.0 + a.dot(b)) / 2.0;
    CHECK(std::abs(t.plus_frequency() - p) < 5.0 * std::sqrt(p * (1.0 - p) / t.accepted) + 1e-12);
    CHECK(std::abs(t.acceptance_rate() - 0.5) < 5.0 * std::sqrt(0.25 / t.sent));
  }
}

TEST_CASE("transcripts are reproducible and the trace has one row per round") {
  const BlochVector a = BlochVector::z_axis();
  const BlochVector b = BlochVector::from_angles(1.0, 2.0);
  std::ostringstream trace;
  const auto t1 = run_channel(a, b, 500, 7, &trace);
  const auto t2 = run_channel(a, b, 500, 7);
  CHECK(t1.sent == t2.sent);
  CHECK(t1.plus == t2.plus);

  std::istringstream in(trace.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "round_id,lambda_x,lambda_y,lambda_z,accepted,outcome");
  std::uint64_t rows = 0;
  std::uint64_t accepted = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",1,") != std::string::npos) ++accepted;
  }
  CHECK(rows == t1.sent);
  CHECK(accepted == t1.accepted);
}

TEST_CASE("transcript JSON") {
  const auto t = run_channel(BlochVector::z_axis(), BlochVector::x_axis(), 10, 3);
  const auto j = t.to_json();
  CHECK(j.at("nominal_bits_per_round") == 2);
  CHECK(j.at("outcome_counts").contains("+b"));
  CHECK(j.at("seed") == 3);
}

TEST_CASE("communication cost") {
  const auto t = run_channel(BlochVector::z_axis(), BlochVector::x_axis(), 20000, 5);
  const auto c = communication_cost(t);
  CHECK(c.nominal_bits == 2.0);
  CHECK(c.empirical_bits == doctest::Approx(static_cast<double>(t.sent) / t.accepted));
  ChannelTranscript empty{BlochVector::z_axis(), BlochVector::z_axis()};
  CHECK_THROWS_AS((void)communication_cost(empty), InvariantError);
  CHECK_THROWS_AS((void)run_channel(BlochVector::z_axis(), BlochVector::z_axis(), 0, 1), InvariantError);
}

TEST_CASE("mutual information between Alice's axis and lambda") {
  const auto r = mutual_information_report(16);
  CHECK(r.h_a == doctest::Approx(std::log(4.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(r.h_joint == doctest::Approx(std::log(8.0 * std::numbers::pi * std::numbers::pi)).epsilon(1e-9));
  CHECK(r.mutual_information == doctest::Approx(std::numbers::ln2).epsilon(1e-9));
  CHECK(r.mutual_information_bits() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS((void)mutual_information_report(0), InvariantError);
}
