// Finite ontic spaces: Brans' singlet model and the generalized Brans model.

#include <algorithm>
#include <array>

#include "mdhv/errors.hpp"
#include "mdhv/models.hpp"
#include "point_access.hpp"

namespace mdhv {

namespace {

class BransBound final : public BoundModel {
 public:
  explicit BransBound(const ModelContext& ctx) : BoundModel(ctx) {
    const auto* s = ctx.settings();
    if (!ctx.is_singlet() || s == nullptr) throw ContextError("brans: context must be the singlet with qubit-pair settings");
    a_ = s->a;
    b_ = s->b;
    for (int i : {1, -1}) {
      for (int j : {1, -1}) probs_[pair_outcome_index(i, j)] = singlet_outcome_probability(a_, b_, i, j);
    }
    set_outcomes(pair_outcome_labels(), {probs_.begin(), probs_.end()});
  }

  OnticPoint sample(Stream& rng) const override {
    const std::size_t idx = rng.categorical(probs_);
    return SettingsOutcomePair{idx < 2 ? 1 : -1, idx % 2 == 0 ? 1 : -1, a_, b_};
  }

  double density(const OnticPoint& lambda) const override {
    const auto& p = point_as<SettingsOutcomePair>(lambda, "brans");
    if (!(p.a == a_) || !(p.b == b_)) return 0.0;
    return probs_[pair_outcome_index(p.i, p.j)];
  }

  void respond(const OnticPoint& lambda, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[outcome_of(lambda)] = 1.0;
  }

  std::size_t draw_outcome(const OnticPoint& lambda, Stream&) const override { return outcome_of(lambda); }

 private:
  static std::size_t outcome_of(const OnticPoint& lambda) {
    const auto& p = point_as<SettingsOutcomePair>(lambda, "brans");
    return pair_outcome_index(p.i, p.j);
  }

  BlochVector a_ = BlochVector::z_axis();
  BlochVector b_ = BlochVector::z_axis();
  std::array<double, 4> probs_{};
};

class GeneralizedBransBound final : public BoundModel {
 public:
  explicit GeneralizedBransBound(const ModelContext& ctx) : BoundModel(ctx) {
    const Povm* m = ctx.povm();
    if (m == nullptr || ctx.is_singlet()) throw ContextError("gbrans: context needs a state and a Povm");
    probs_ = ctx.pure_state() != nullptr ? born_probabilities(*ctx.pure_state(), *m)
                                         : born_probabilities(*ctx.mixed_state(), *m);
    set_outcomes(m->labels(), probs_);
  }

  OnticPoint sample(Stream& rng) const override { return DiscreteIndex{rng.categorical(probs_)}; }

  double density(const OnticPoint& lambda) const override { return probs_[checked_index(lambda)]; }

  void respond(const OnticPoint& lambda, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[checked_index(lambda)] = 1.0;
  }

  std::size_t draw_outcome(const OnticPoint& lambda, Stream&) const override { return checked_index(lambda); }

 private:
  std::size_t checked_index(const OnticPoint& lambda) const {
    const std::size_t j = point_as<DiscreteIndex>(lambda, "gbrans").j;
    if (j >= probs_.size()) throw LabelError("gbrans: lambda index out of range");
    return j;
  }

  std::vector<double> probs_;
};

}  // namespace

// ---------------------------------------------------------------------------

std::unique_ptr<const BoundModel> BransSinglet::bind(const ModelContext& ctx) const {
  return std::make_unique<BransBound>(ctx);
}

std::optional<std::vector<OnticPoint>> BransSinglet::enumerate(const ModelContext& ctx) const {
  const auto* s = ctx.settings();
  if (!ctx.is_singlet() || s == nullptr) throw ContextError("brans: context must be the singlet with qubit-pair settings");
  std::vector<OnticPoint> out;
  for (int i : {1, -1}) {
    for (int j : {1, -1}) out.emplace_back(SettingsOutcomePair{i, j, s->a, s->b});
  }
  return out;
}

std::vector<WeightedPoint> BransSinglet::quadrature(std::span<const ModelContext> contexts, std::size_t,
                                                    Stream&) const {
  std::vector<WeightedPoint> out;
  for (const auto& ctx : contexts) {
    auto points = enumerate(ctx);
    for (auto& p : *points) {
      const bool seen = std::any_of(out.begin(), out.end(), [&](const WeightedPoint& w) { return w.point == p; });
      if (!seen) out.push_back(WeightedPoint{std::move(p), 1.0});
    }
  }
  return out;
}

double BransSinglet::marginal_density(int particle, int i, const QubitPairSettings& settings) {
  if (particle != 1 && particle != 2) throw LabelError("brans: particle must be 1 or 2");
  static const CMatrix singlet = singlet_state().projector();
  static const CMatrix reduced_first = partial_trace_second(singlet, 2, 2);
  static const CMatrix reduced_second = partial_trace_first(singlet, 2, 2);
  const CMatrix& reduced = particle == 1 ? reduced_first : reduced_second;
  const BlochVector& local = particle == 1 ? settings.a : settings.b;
  return (reduced * spin_projector(local, i)).trace().real();
}

// ---------------------------------------------------------------------------

std::unique_ptr<const BoundModel> GeneralizedBrans::bind(const ModelContext& ctx) const {
  return std::make_unique<GeneralizedBransBound>(ctx);
}

std::optional<std::vector<OnticPoint>> GeneralizedBrans::enumerate(const ModelContext& ctx) const {
  const Povm* m = ctx.povm();
  if (m == nullptr) throw ContextError("gbrans: context needs a Povm");
  std::vector<OnticPoint> out;
  out.reserve(m->size());
  for (std::size_t j = 0; j < m->size(); ++j) out.emplace_back(DiscreteIndex{j});
  return out;
}

std::vector<WeightedPoint> GeneralizedBrans::quadrature(std::span<const ModelContext> contexts, std::size_t,
                                                        Stream&) const {
  std::size_t count = 0;
  for (const auto& ctx : contexts) {
    if (ctx.povm() == nullptr) throw ContextError("gbrans: context needs a Povm");
    count = std::max(count, ctx.povm()->size());
  }
  std::vector<WeightedPoint> out;
  for (std::size_t j = 0; j < count; ++j) out.push_back(WeightedPoint{DiscreteIndex{j}, 1.0});
  return out;
}

}  // namespace mdhv
