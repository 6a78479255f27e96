#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>

#include "json.hpp"
#include "mdhv/bloch.hpp"
#include "mdhv/ontic.hpp"
#include "mdhv/rng.hpp"

namespace mdhv {

/// Alice's draw: lambda uniform on the open hemisphere around a (density Theta(lambda.a)/2pi).
[[nodiscard]] SpherePoint alice_send(const BlochVector& a, Stream& rng);

/// Bob keeps lambda with probability |lambda.b|.
[[nodiscard]] bool bob_filter(const SpherePoint& lambda, const BlochVector& b, Stream& rng);

/// +1 for outcome +b (lambda.b >= 0), -1 for -b.
[[nodiscard]] int bob_outcome(const SpherePoint& lambda, const BlochVector& b) noexcept;

/// Wire format between the parties.
struct ChannelMessage {
  std::uint64_t round_id = 0;
  BlochVector lambda;
};

class Alice {
 public:
  Alice(const BlochVector& a, Stream rng) : a_(a), rng_(rng) {}

  ChannelMessage next();

 private:
  BlochVector a_;
  Stream rng_;
  std::uint64_t round_ = 0;
};

class Bob {
 public:
  struct Decision {
    bool accepted = false;
    int outcome = 0;  ///< +1 / -1 when accepted
  };

  Bob(const BlochVector& b, Stream rng) : b_(b), rng_(rng) {}

  Decision receive(const ChannelMessage& msg);

 private:
  BlochVector b_;
  Stream rng_;
};

struct ChannelTranscript {
  BlochVector alice_axis;
  BlochVector bob_axis;
  std::uint64_t sent = 0;
  std::uint64_t accepted = 0;
  std::uint64_t plus = 0;   ///< outcome +b
  std::uint64_t minus = 0;  ///< outcome -b
  double nominal_bits_per_round = 2.0;
  std::uint64_t seed = 0;

  [[nodiscard]] double acceptance_rate() const noexcept;
  [[nodiscard]] double plus_frequency() const noexcept;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/**
 * Runs rounds until `target_accepted` are accepted. Alice draws from
 * Stream(seed, 0) and Bob from Stream(seed, 1); messages pass through a FIFO.
 * When `trace` is set, one CSV row per round is written:
 * round_id,lambda_x,lambda_y,lambda_z,accepted,outcome.
 */
[[nodiscard]] ChannelTranscript run_channel(const BlochVector& a, const BlochVector& b, std::uint64_t target_accepted,
                                            std::uint64_t seed, std::ostream* trace = nullptr);

/// Entropies in nats under uniform priors on a.
struct InfoReport {
  double h_a = 0.0;
  double h_lambda = 0.0;
  double h_joint = 0.0;
  double mutual_information = 0.0;
  std::size_t resolution = 0;

  [[nodiscard]] double mutual_information_bits() const noexcept;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/**
 * h(a) and h(lambda) are ln 4pi in closed form; h(lambda, a) is a
 * Gauss-Legendre product rule in (cos theta, azimuth) on each sphere, with the
 * inner cos theta range cut to the hemisphere around a so the rule never
 * straddles the step.
 */
[[nodiscard]] InfoReport mutual_information_report(std::size_t resolution = 64);

struct CommunicationCost {
  double nominal_bits = 2.0;
  double empirical_bits = 0.0;  ///< 1 bit of mutual information times sent / accepted
};

[[nodiscard]] CommunicationCost communication_cost(const ChannelTranscript& t);

}  // namespace mdhv
