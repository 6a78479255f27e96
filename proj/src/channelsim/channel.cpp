#include "mdhv/channel.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "mdhv/errors.hpp"
#include "mdhv/sphere.hpp"

namespace mdhv {

namespace {

constexpr double kPi = std::numbers::pi;

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

nlohmann::ordered_json vec_json(const BlochVector& v) { return {v.x(), v.y(), v.z()}; }

}  // namespace

SpherePoint alice_send(const BlochVector& a, Stream& rng) { return SpherePoint{sphere::uniform_hemisphere(a, rng)}; }

bool bob_filter(const SpherePoint& lambda, const BlochVector& b, Stream& rng) {
  return rng.uniform() < std::abs(lambda.v.dot(b));
}

int bob_outcome(const SpherePoint& lambda, const BlochVector& b) noexcept { return sign(lambda.v.dot(b)); }

ChannelMessage Alice::next() { return ChannelMessage{round_++, alice_send(a_, rng_).v}; }

Bob::Decision Bob::receive(const ChannelMessage& msg) {
  const SpherePoint p{msg.lambda};
  if (!bob_filter(p, b_, rng_)) return Decision{false, 0};
  return Decision{true, bob_outcome(p, b_)};
}

double ChannelTranscript::acceptance_rate() const noexcept {
  return sent == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(sent);
}

double ChannelTranscript::plus_frequency() const noexcept {
  return accepted == 0 ? 0.0 : static_cast<double>(plus) / static_cast<double>(accepted);
}

nlohmann::ordered_json ChannelTranscript::to_json() const {
  nlohmann::ordered_json j;
  j["alice_axis"] = vec_json(alice_axis);
  j["bob_axis"] = vec_json(bob_axis);
  j["sent"] = sent;
  j["accepted"] = accepted;
  j["outcome_counts"] = {{"+b", plus}, {"-b", minus}};
  j["nominal_bits_per_round"] = nominal_bits_per_round;
  j["seed"] = seed;
  return j;
}

ChannelTranscript run_channel(const BlochVector& a, const BlochVector& b, std::uint64_t target_accepted,
                              std::uint64_t seed, std::ostream* trace) {
  if (target_accepted == 0) throw InvariantError("run_channel: target_accepted must be at least 1");
  Alice alice(a, Stream(seed, 0));
  Bob bob(b, Stream(seed, 1));
  std::deque<ChannelMessage> wire;

  ChannelTranscript t{a, b};
  t.seed = seed;
  if (trace != nullptr) *trace << "round_id,lambda_x,lambda_y,lambda_z,accepted,outcome\n";
  std::string row;
  while (t.accepted < target_accepted) {
    wire.push_back(alice.next());
    ++t.sent;
    const ChannelMessage msg = wire.front();
    wire.pop_front();
    const Bob::Decision d = bob.receive(msg);
    if (d.accepted) {
      ++t.accepted;
      ++(d.outcome > 0 ? t.plus : t.minus);
    }
    if (trace != nullptr) {
      row.clear();
      row += std::to_string(msg.round_id);
      for (double c : msg.lambda.components()) {
        row += ',';
        append_double(row, c);
      }
      row += d.accepted ? ",1," : ",0,";
      row += d.accepted ? (d.outcome > 0 ? "+b" : "-b") : "";
      row += '\n';
      *trace << row;
    }
  }
  return t;
}

double InfoReport::mutual_information_bits() const noexcept { return mutual_information / std::numbers::ln2; }

nlohmann::ordered_json InfoReport::to_json() const {
  nlohmann::ordered_json j;
  j["h_a"] = h_a;
  j["h_lambda"] = h_lambda;
  j["h_joint"] = h_joint;
  j["mutual_information"] = mutual_information;
  j["mutual_information_bits"] = mutual_information_bits();
  j["resolution"] = resolution;
  return j;
}

InfoReport mutual_information_report(std::size_t resolution) {
  if (resolution == 0) throw InvariantError("mutual_information_report: resolution must be positive");
  const auto outer_z = sphere::GaussLegendre::on(resolution, -1.0, 1.0);
  const auto inner_z = sphere::GaussLegendre::on(resolution, 0.0, 1.0);
  const auto azimuth = sphere::GaussLegendre::on(resolution, 0.0, 2.0 * kPi);

  const double p_a = 1.0 / (4.0 * kPi);
  double h_joint = 0.0;
  for (std::size_t i = 0; i < resolution; ++i) {
    const double za = outer_z.nodes[i];
    const double ra = std::sqrt(std::max(0.0, 1.0 - za * za));
    for (std::size_t j = 0; j < resolution; ++j) {
      const BlochVector a =
          BlochVector::from_components(ra * std::cos(azimuth.nodes[j]), ra * std::sin(azimuth.nodes[j]), za);
      const Frame frame = Frame::around(a);
      const double wa = outer_z.weights[i] * azimuth.weights[j];
      double inner = 0.0;
      for (std::size_t k = 0; k < resolution; ++k) {
        const double zl = inner_z.nodes[k];
        const double rl = std::sqrt(std::max(0.0, 1.0 - zl * zl));
        for (std::size_t l = 0; l < resolution; ++l) {
          const BlochVector lambda =
              frame.compose(rl * std::cos(azimuth.nodes[l]), rl * std::sin(azimuth.nodes[l]), zl);
          const double f = step(lambda.dot(a)) / (2.0 * kPi) * p_a;
          if (f > 0.0) inner += inner_z.weights[k] * azimuth.weights[l] * (-f * std::log(f));
        }
      }
      h_joint += wa * inner;
    }
  }

  InfoReport r;
  r.h_a = std::log(4.0 * kPi);
  r.h_lambda = std::log(4.0 * kPi);
  r.h_joint = h_joint;
  r.mutual_information = r.h_a + r.h_lambda - r.h_joint;
  r.resolution = resolution;
  return r;
}

CommunicationCost communication_cost(const ChannelTranscript& t) {
  if (t.accepted == 0) throw InvariantError("communication_cost: transcript has no accepted rounds");
  constexpr double kMutualInformationBits = 1.0;
  return CommunicationCost{t.nominal_bits_per_round,
                           kMutualInformationBits * static_cast<double>(t.sent) / static_cast<double>(t.accepted)};
}

}  // namespace mdhv
