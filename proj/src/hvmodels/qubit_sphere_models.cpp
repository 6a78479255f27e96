// Qubit models whose hidden variable lives on the Bloch sphere: modified
// Kochen-Specker I and II and the modified Bell-Mermin model.

#include <algorithm>
#include <array>
#include <numbers>

#include "mdhv/errors.hpp"
#include "mdhv/models.hpp"
#include "mdhv/sphere.hpp"
#include "point_access.hpp"

namespace mdhv {

namespace {

constexpr double kPi = std::numbers::pi;

/// Qubit pure state with a two-outcome projective basis; Bloch vectors of both.
struct QubitGeometry {
  BlochVector psi;
  std::array<BlochVector, 2> axes;

  static QubitGeometry from(const ModelContext& ctx, std::string_view model) {
    const StateVector* s = ctx.pure_state();
    const Povm* m = ctx.povm();
    if (s == nullptr || m == nullptr) {
      throw ContextError(std::string(model) + ": context needs a pure qubit state and a qubit basis");
    }
    if (s->dim() != 2) throw ContextError(std::string(model) + ": defined for qubits only");
    if (!m->is_projective()) throw ContextError(std::string(model) + ": measurement must be a projective basis");
    return QubitGeometry{bloch_from_ket(*s), {bloch_from_projector((*m)[0].op), bloch_from_projector((*m)[1].op)}};
  }
};

/// Label weights (1 + k.psi)/2; rounding residue on an impossible label is snapped to zero.
std::array<double, 2> label_weights(const QubitGeometry& g) {
  std::array<double, 2> w{};
  for (std::size_t k = 0; k < 2; ++k) {
    w[k] = std::clamp((1.0 + g.axes[k].dot(g.psi)) / 2.0, 0.0, 1.0);
    if (w[k] < tol::kArithmetic) w[k] = 0.0;
  }
  return w;
}

std::size_t checked_label(const LabeledSphere& p, std::string_view model) {
  if (p.k >= 2) throw LabelError(std::string(model) + ": label index out of range");
  return p.k;
}

std::vector<WeightedPoint> labeled_sphere_rule(std::size_t resolution, Stream& rng) {
  const auto points = sphere::stratified(resolution, rng);
  const double w = sphere::kArea / static_cast<double>(points.size());
  std::vector<WeightedPoint> out;
  out.reserve(2 * points.size());
  for (std::size_t k = 0; k < 2; ++k) {
    for (const auto& v : points) out.push_back(WeightedPoint{LabeledSphere{k, v}, w});
  }
  return out;
}

// ---------------------------------------------------------------------------

class Ks1Bound final : public BoundModel {
 public:
  explicit Ks1Bound(const ModelContext& ctx) : BoundModel(ctx), g_(QubitGeometry::from(ctx, "ks1")) {
    weights_ = label_weights(g_);
    set_outcomes(ctx.povm()->labels(), born_probabilities(*ctx.pure_state(), *ctx.povm()));
  }

  OnticPoint sample(Stream& rng) const override {
    const std::size_t k = rng.categorical(weights_);
    // Rejection from the uniform sphere; the conditional's supremum is attained at v = psi.
    for (;;) {
      const BlochVector v = sphere::uniform(rng);
      if (g_.axes[k].dot(v) < 0.0) continue;
      const double d = g_.psi.dot(v);
      if (d > 0.0 && rng.uniform() < d) return LabeledSphere{k, v};
    }
  }

  double density(const OnticPoint& lambda) const override {
    const auto& p = point_as<LabeledSphere>(lambda, "ks1");
    const std::size_t k = checked_label(p, "ks1");
    const double d = g_.psi.dot(p.v);
    if (d <= 0.0) return 0.0;
    return step(g_.axes[k].dot(p.v)) * d / kPi;
  }

  void respond(const OnticPoint& lambda, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[checked_label(point_as<LabeledSphere>(lambda, "ks1"), "ks1")] = 1.0;
  }

  std::size_t draw_outcome(const OnticPoint& lambda, Stream&) const override {
    return checked_label(point_as<LabeledSphere>(lambda, "ks1"), "ks1");
  }

 private:
  QubitGeometry g_;
  std::array<double, 2> weights_{};
};

class Ks2Bound final : public BoundModel {
 public:
  explicit Ks2Bound(const ModelContext& ctx)
      : BoundModel(ctx), a_(QubitGeometry::from(ctx, "ks2").psi), b_(QubitGeometry::from(ctx, "ks2").axes[0]) {
    set_outcomes(ctx.povm()->labels(), born_probabilities(*ctx.pure_state(), *ctx.povm()));
  }

  OnticPoint sample(Stream& rng) const override {
    // Envelope: the supremum 1/pi of Theta(v.a)|v.b|/pi.
    for (;;) {
      const BlochVector v = sphere::uniform(rng);
      if (v.dot(a_) < 0.0) continue;
      if (rng.uniform() < std::abs(v.dot(b_))) return SpherePoint{v};
    }
  }

  double density(const OnticPoint& lambda) const override {
    const BlochVector& v = point_as<SpherePoint>(lambda, "ks2").v;
    return step(v.dot(a_)) * std::abs(v.dot(b_)) / kPi;
  }

  void respond(const OnticPoint& lambda, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[outcome_of(lambda)] = 1.0;
  }

  std::size_t draw_outcome(const OnticPoint& lambda, Stream&) const override { return outcome_of(lambda); }

 private:
  /// Element 0 is +b, element 1 is -b; p(k|v) = Theta(v.k).
  std::size_t outcome_of(const OnticPoint& lambda) const {
    return sign(point_as<SpherePoint>(lambda, "ks2").v.dot(b_)) > 0 ? 0 : 1;
  }

  BlochVector a_;
  BlochVector b_;
};

class BellMerminBound final : public BoundModel {
 public:
  explicit BellMerminBound(const ModelContext& ctx)
      : BoundModel(ctx),
        g_(QubitGeometry::from(ctx, "bellmermin")),
        frames_{Frame::around(g_.axes[0]), Frame::around(g_.axes[1])} {
    weights_ = label_weights(g_);
    for (std::size_t k = 0; k < 2; ++k) k_dot_psi_[k] = g_.axes[k].dot(g_.psi);
    set_outcomes(ctx.povm()->labels(), born_probabilities(*ctx.pure_state(), *ctx.povm()));
  }

  OnticPoint sample(Stream& rng) const override {
    const std::size_t k = rng.categorical(weights_);
    // Support of the conditional is the cap k.v >= -k.psi, where it is uniform.
    for (;;) {
      LabeledSphere p{k, sphere::uniform_cap(frames_[k], -k_dot_psi_[k], rng)};
      if (density(p) > 0.0) return p;
    }
  }

  double density(const OnticPoint& lambda) const override {
    const auto& p = point_as<LabeledSphere>(lambda, "bellmermin");
    const std::size_t k = checked_label(p, "bellmermin");
    return step(k_dot_psi_[k] + g_.axes[k].dot(p.v)) / (4.0 * kPi);
  }

  void respond(const OnticPoint& lambda, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[checked_label(point_as<LabeledSphere>(lambda, "bellmermin"), "bellmermin")] = 1.0;
  }

  std::size_t draw_outcome(const OnticPoint& lambda, Stream&) const override {
    return checked_label(point_as<LabeledSphere>(lambda, "bellmermin"), "bellmermin");
  }

 private:
  QubitGeometry g_;
  std::array<Frame, 2> frames_;
  std::array<double, 2> weights_{};
  std::array<double, 2> k_dot_psi_{};
};

}  // namespace

std::unique_ptr<const BoundModel> ModifiedKs1::bind(const ModelContext& ctx) const {
  return std::make_unique<Ks1Bound>(ctx);
}

std::vector<WeightedPoint> ModifiedKs1::quadrature(std::span<const ModelContext>, std::size_t resolution,
                                                   Stream& rng) const {
  return labeled_sphere_rule(resolution, rng);
}

std::unique_ptr<const BoundModel> ModifiedKs2::bind(const ModelContext& ctx) const {
  return std::make_unique<Ks2Bound>(ctx);
}

std::vector<WeightedPoint> ModifiedKs2::quadrature(std::span<const ModelContext>, std::size_t resolution,
                                                   Stream& rng) const {
  const auto points = sphere::stratified(resolution, rng);
  const double w = sphere::kArea / static_cast<double>(points.size());
  std::vector<WeightedPoint> out;
  out.reserve(points.size());
  for (const auto& v : points) out.push_back(WeightedPoint{SpherePoint{v}, w});
  return out;
}

std::unique_ptr<const BoundModel> ModifiedBellMermin::bind(const ModelContext& ctx) const {
  return std::make_unique<BellMerminBound>(ctx);
}

std::vector<WeightedPoint> ModifiedBellMermin::quadrature(std::span<const ModelContext>, std::size_t resolution,
                                                          Stream& rng) const {
  return labeled_sphere_rule(resolution, rng);
}

}  // namespace mdhv
