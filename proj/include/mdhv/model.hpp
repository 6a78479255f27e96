#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdhv/context.hpp"
#include "mdhv/ontic.hpp"
#include "mdhv/rng.hpp"
#include "mdhv/tolerances.hpp"

namespace mdhv {

/// Measure with respect to which a model's density is stated.
enum class ReferenceMeasure {
  kCounting,             ///< finite ontic space, densities are probabilities
  kLebesgue,             ///< points of the real line
  kSphereSurface,        ///< area element on the unit sphere (total 4 pi)
  kCountingTimesSphere,  ///< finite label times sphere area
};

[[nodiscard]] std::string_view to_string(ReferenceMeasure m) noexcept;

/// A point of the ontic space with its quadrature weight under the reference measure.
struct WeightedPoint {
  OnticPoint point;
  double weight;
};

/**
 * A model specialized to one context. Everything that depends only on the
 * context (Born weights, Bloch vectors, bin edges, envelopes) is computed once
 * in the constructor so the per-sample paths stay cheap.
 */
class BoundModel {
 public:
  explicit BoundModel(ModelContext ctx);
  virtual ~BoundModel() = default;

  BoundModel(const BoundModel&) = delete;
  BoundModel& operator=(const BoundModel&) = delete;

  [[nodiscard]] const ModelContext& context() const noexcept { return ctx_; }

  [[nodiscard]] virtual OnticPoint sample(Stream& rng) const = 0;

  /// p(lambda | preparation, measurement) w.r.t. the model's reference measure.
  [[nodiscard]] virtual double density(const OnticPoint& lambda) const = 0;

  /// p(k | lambda, measurement) for every outcome k, written to `out` (size outcome_count()).
  virtual void respond(const OnticPoint& lambda, std::span<double> out) const = 0;

  [[nodiscard]] std::vector<double> respond(const OnticPoint& lambda) const;

  /// Outcome index drawn from the response function. Deterministic models skip the draw.
  [[nodiscard]] virtual std::size_t draw_outcome(const OnticPoint& lambda, Stream& rng) const;

  [[nodiscard]] bool in_support(const OnticPoint& lambda) const { return density(lambda) > tol::kSupport; }

  [[nodiscard]] std::size_t outcome_count() const noexcept { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& outcome_labels() const noexcept { return labels_; }

  /// Quantum prediction for each outcome, from the quantum core.
  [[nodiscard]] const std::vector<double>& born_reference() const noexcept { return born_; }

 protected:
  void set_outcomes(std::vector<std::string> labels, std::vector<double> born);

 private:
  ModelContext ctx_;
  std::vector<std::string> labels_;
  std::vector<double> born_;
};

/**
 * Uniform interface over the hidden-variable models: an ontic space with a
 * declared reference measure, a context-conditioned density, and a response
 * function. Implementations are immutable and safe to share across threads.
 */
class HiddenVariableModel {
 public:
  virtual ~HiddenVariableModel() = default;

  [[nodiscard]] virtual std::string_view name() const noexcept = 0;
  [[nodiscard]] virtual ReferenceMeasure reference_measure() const noexcept = 0;
  [[nodiscard]] virtual bool is_deterministic() const noexcept = 0;

  /// True for the two-party singlet models (outcomes "++", "+-", "-+", "--").
  [[nodiscard]] virtual bool is_bipartite() const noexcept { return false; }

  /// Validates `ctx` (ContextError / DimensionError) and precomputes per-context data.
  [[nodiscard]] virtual std::unique_ptr<const BoundModel> bind(const ModelContext& ctx) const = 0;

  /// Whole ontic space when it is finite for this context; std::nullopt otherwise.
  [[nodiscard]] virtual std::optional<std::vector<OnticPoint>> enumerate(const ModelContext& ctx) const;

  /**
   * Integration rule valid for the densities of every context in `contexts`
   * simultaneously: sum(weight * f(point)) approximates the integral of f
   * under the reference measure. Exact for finite and piecewise-constant
   * spaces; stratified Monte Carlo with about `resolution` points otherwise.
   */
  [[nodiscard]] virtual std::vector<WeightedPoint> quadrature(std::span<const ModelContext> contexts,
                                                              std::size_t resolution, Stream& rng) const = 0;

  // One-shot conveniences; hot loops should bind() once instead.
  [[nodiscard]] OnticPoint sample(const ModelContext& ctx, Stream& rng) const;
  [[nodiscard]] double density(const OnticPoint& lambda, const ModelContext& ctx) const;
  [[nodiscard]] std::vector<double> respond(const OnticPoint& lambda, const ModelContext& ctx) const;
  [[nodiscard]] bool in_support(const OnticPoint& lambda, const ModelContext& ctx) const;
};

/**
 * Density of a mixture sum_i w_i |a_i><a_i| at lambda: the convex combination
 * of the pure-state densities under the same measurement.
 */
[[nodiscard]] double mixture_density(const HiddenVariableModel& model, const Mixture& mixture, const Povm& m,
                                     const OnticPoint& lambda);

/// Outcome label index of a two-party outcome (i, j), i, j in {+1, -1}: "++", "+-", "-+", "--".
[[nodiscard]] constexpr std::size_t pair_outcome_index(int i, int j) noexcept {
  return (i == 1 ? 0U : 2U) + (j == 1 ? 0U : 1U);
}

[[nodiscard]] const std::vector<std::string>& pair_outcome_labels();

}  // namespace mdhv
