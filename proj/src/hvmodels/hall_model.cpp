// Modified Hall model for the singlet: antipodal sphere vectors with a
// setting-dependent density on the sign regions of (v.a)(v.b).

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mdhv/errors.hpp"
#include "mdhv/models.hpp"
#include "mdhv/sphere.hpp"
#include "point_access.hpp"

namespace mdhv {

namespace {

constexpr double kPi = std::numbers::pi;

/// Density of v (or of -v; the form is even) under settings (a, b).
class HallDensity {
 public:
  HallDensity(const BlochVector& a, const BlochVector& b) : a_(a), b_(b) {
    c_ = std::clamp(a.dot(b), -1.0, 1.0);
    t_ = 1.0 - 2.0 * std::acos(c_) / kPi;
    degenerate_ = std::abs(1.0 - std::abs(c_)) < tol::kDegenerateSetting;
    dominant_ = sign(c_);
    if (degenerate_) {
      values_[0] = dominant_ > 0 ? 1.0 / (4.0 * kPi) : 0.0;
      values_[1] = dominant_ < 0 ? 1.0 / (4.0 * kPi) : 0.0;
    } else {
      values_[0] = (1.0 + c_) / (1.0 + t_) / (4.0 * kPi);
      values_[1] = (1.0 - c_) / (1.0 - t_) / (4.0 * kPi);
    }
    max_ = std::max(values_[0], values_[1]);
  }

  [[nodiscard]] int region(const BlochVector& v) const noexcept { return sign(v.dot(a_) * v.dot(b_)); }

  [[nodiscard]] double operator()(const BlochVector& v) const noexcept { return values_[region(v) > 0 ? 0 : 1]; }

  [[nodiscard]] BlochVector sample(Stream& rng) const {
    for (;;) {
      const BlochVector v = sphere::uniform(rng);
      if (degenerate_) {
        if (region(v) == dominant_) return v;
        continue;
      }
      // Keep the sign of (v.a)(v.b) unambiguous.
      if (v.dot(a_) == 0.0 || v.dot(b_) == 0.0) continue;
      if (rng.uniform() * max_ < (*this)(v)) return v;
    }
  }

 private:
  BlochVector a_;
  BlochVector b_;
  double c_ = 0.0;
  double t_ = 0.0;
  bool degenerate_ = false;
  int dominant_ = 1;
  double values_[2] = {0.0, 0.0};
  double max_ = 0.0;
};

const QubitPairSettings& checked_settings(const ModelContext& ctx) {
  const auto* s = ctx.settings();
  if (!ctx.is_singlet() || s == nullptr) throw ContextError("hall: context must be the singlet with qubit-pair settings");
  return *s;
}

class HallBound final : public BoundModel {
 public:
  explicit HallBound(const ModelContext& ctx)
      : BoundModel(ctx), settings_(checked_settings(ctx)), density_(settings_.a, settings_.b) {
    std::vector<double> born(4);
    for (int i : {1, -1}) {
      for (int j : {1, -1}) born[pair_outcome_index(i, j)] = singlet_outcome_probability(settings_.a, settings_.b, i, j);
    }
    set_outcomes(pair_outcome_labels(), std::move(born));
  }

  OnticPoint sample(Stream& rng) const override { return AntipodalPair(density_.sample(rng)); }

  double density(const OnticPoint& lambda) const override {
    const auto& p = point_as<AntipodalPair>(lambda, "hall");
    if (!(p.second() == -p.first())) return 0.0;
    return density_(p.first());
  }

  void respond(const OnticPoint& lambda, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[outcome_of(lambda)] = 1.0;
  }

  std::size_t draw_outcome(const OnticPoint& lambda, Stream&) const override { return outcome_of(lambda); }

 private:
  std::size_t outcome_of(const OnticPoint& lambda) const {
    const auto& p = point_as<AntipodalPair>(lambda, "hall");
    return pair_outcome_index(sign(p.first().dot(settings_.a)), sign(p.second().dot(settings_.b)));
  }

  QubitPairSettings settings_;
  HallDensity density_;
};

}  // namespace

std::unique_ptr<const BoundModel> ModifiedHall::bind(const ModelContext& ctx) const {
  return std::make_unique<HallBound>(ctx);
}

std::vector<WeightedPoint> ModifiedHall::quadrature(std::span<const ModelContext>, std::size_t resolution,
                                                    Stream& rng) const {
  const auto points = sphere::stratified(resolution, rng);
  const double w = sphere::kArea / static_cast<double>(points.size());
  std::vector<WeightedPoint> out;
  out.reserve(points.size());
  for (const auto& v : points) out.push_back(WeightedPoint{AntipodalPair(v), w});
  return out;
}

double ModifiedHall::marginal_density(int particle, const BlochVector& v, const QubitPairSettings& settings) {
  if (particle != 1 && particle != 2) throw LabelError("hall: particle must be 1 or 2");
  // lambda_2 = -lambda_1 and the density is even in v, so both marginals share one form.
  return HallDensity(settings.a, settings.b)(particle == 1 ? v : -v);
}

}  // namespace mdhv
