#include <algorithm>
#include <cmath>

#include "mdhv/errors.hpp"
#include "mdhv/models.hpp"
#include "point_access.hpp"

namespace mdhv {

namespace {

class IntervalBound final : public BoundModel {
 public:
  explicit IntervalBound(const ModelContext& ctx) : BoundModel(ctx) {
    const StateVector* psi = ctx.pure_state();
    const Povm* m = ctx.povm();
    if (psi == nullptr || m == nullptr) throw ContextError("interval: context needs a pure state and a basis");
    if (!m->is_projective()) throw ContextError("interval: measurement must be a projective basis");

    const std::vector<double> born = born_probabilities(*psi, *m);
    lengths_.resize(born.size());
    edges_.resize(born.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < born.size(); ++i) {
      lengths_[i] = std::sqrt(born[i]);  // |<e_i|psi>| for a rank-1 projector
      acc += lengths_[i];
      edges_[i] = acc;
    }
    weights_ = born;
    tag_ = std::make_shared<const StateVector>(*psi);
    set_outcomes(m->labels(), born);
  }

  OnticPoint sample(Stream& rng) const override {
    const std::size_t bin = rng.categorical(weights_);
    const double lo = bin == 0 ? 0.0 : edges_[bin - 1];
    for (;;) {
      // (lo, hi]; a rounded draw that lands on the lower edge belongs to the previous bin, so redraw.
      const double x = lo + (1.0 - rng.uniform()) * lengths_[bin];
      if (bin_of(x) == bin && x <= edges_[bin]) return IntervalPoint{x, tag_};
    }
  }

  double density(const OnticPoint& lambda) const override {
    const auto& p = point_as<IntervalPoint>(lambda, "interval");
    if (p.preparation && !same_ray(*p.preparation)) return 0.0;
    const double x = p.x;
    if (!(x >= 0.0) || x > edges_.back()) return 0.0;
    return lengths_[bin_of(x)];
  }

  void respond(const OnticPoint& lambda, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[bin_of(point_as<IntervalPoint>(lambda, "interval").x)] = 1.0;
  }

  std::size_t draw_outcome(const OnticPoint& lambda, Stream&) const override {
    return bin_of(point_as<IntervalPoint>(lambda, "interval").x);
  }

  [[nodiscard]] const std::vector<double>& edges() const noexcept { return edges_; }
  [[nodiscard]] const std::shared_ptr<const StateVector>& tag() const noexcept { return tag_; }

 private:
  /// First bin whose upper edge is >= x; points past the range map to the last bin.
  std::size_t bin_of(double x) const noexcept {
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), x);
    return it == edges_.end() ? edges_.size() - 1 : static_cast<std::size_t>(it - edges_.begin());
  }

  bool same_ray(const StateVector& s) const {
    return s.dim() == tag_->dim() && std::abs(overlap_sq(s, *tag_) - 1.0) <= tol::kStructural;
  }

  std::shared_ptr<const StateVector> tag_;
  std::vector<double> lengths_;
  std::vector<double> edges_;
  std::vector<double> weights_;
};

}  // namespace

std::unique_ptr<const BoundModel> IntervalModel::bind(const ModelContext& ctx) const {
  return std::make_unique<IntervalBound>(ctx);
}

std::vector<WeightedPoint> IntervalModel::quadrature(std::span<const ModelContext> contexts, std::size_t,
                                                     Stream&) const {
  // One copy of the range per distinct preparation. Within a copy every density
  // is constant between the union of the bin edges of the contexts sharing that
  // preparation, so the midpoint rule is exact.
  std::vector<std::unique_ptr<IntervalBound>> bounds;
  for (const auto& ctx : contexts) bounds.push_back(std::make_unique<IntervalBound>(ctx));

  std::vector<WeightedPoint> out;
  std::vector<bool> done(bounds.size(), false);
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (done[i]) continue;
    std::vector<double> cuts{0.0};
    for (std::size_t j = i; j < bounds.size(); ++j) {
      if (bounds[j]->tag()->dim() != bounds[i]->tag()->dim() ||
          std::abs(overlap_sq(*bounds[j]->tag(), *bounds[i]->tag()) - 1.0) > tol::kStructural) {
        continue;
      }
      done[j] = true;
      cuts.insert(cuts.end(), bounds[j]->edges().begin(), bounds[j]->edges().end());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t c = 1; c < cuts.size(); ++c) {
      const double width = cuts[c] - cuts[c - 1];
      if (width > 0.0) {
        out.push_back(WeightedPoint{IntervalPoint{0.5 * (cuts[c] + cuts[c - 1]), bounds[i]->tag()}, width});
      }
    }
  }
  return out;
}

}  // namespace mdhv
