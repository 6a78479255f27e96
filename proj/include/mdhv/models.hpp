#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "mdhv/model.hpp"

namespace mdhv {

/**
 * Brans' singlet model. The hidden variable carries the two outcome tags and
 * the settings (A, B); the delta factors pinning (A, B) to (a, b) are resolved
 * by construction, so a point only has positive density in the context whose
 * settings it carries. Context: singlet with qubit-pair settings.
 */
class BransSinglet final : public HiddenVariableModel {
 public:
  [[nodiscard]] std::string_view name() const noexcept override { return "brans"; }
  [[nodiscard]] ReferenceMeasure reference_measure() const noexcept override { return ReferenceMeasure::kCounting; }
  [[nodiscard]] bool is_deterministic() const noexcept override { return true; }
  [[nodiscard]] bool is_bipartite() const noexcept override { return true; }
  [[nodiscard]] std::unique_ptr<const BoundModel> bind(const ModelContext& ctx) const override;
  [[nodiscard]] std::optional<std::vector<OnticPoint>> enumerate(const ModelContext& ctx) const override;
  [[nodiscard]] std::vector<WeightedPoint> quadrature(std::span<const ModelContext> contexts, std::size_t resolution,
                                                      Stream& rng) const override;

  /// Distribution of one particle's tag i under settings (a, b), from the reduced singlet state.
  /// The remote setting does not enter the computation.
  [[nodiscard]] static double marginal_density(int particle, int i, const QubitPairSettings& settings);
};

/// Generalized Brans model: lambda_j with p(lambda_j | rho, M) = tr(rho E_j) and p(k | lambda_j) = delta_kj.
class GeneralizedBrans final : public HiddenVariableModel {
 public:
  [[nodiscard]] std::string_view name() const noexcept override { return "gbrans"; }
  [[nodiscard]] ReferenceMeasure reference_measure() const noexcept override { return ReferenceMeasure::kCounting; }
  [[nodiscard]] bool is_deterministic() const noexcept override { return true; }
  [[nodiscard]] std::unique_ptr<const BoundModel> bind(const ModelContext& ctx) const override;
  [[nodiscard]] std::optional<std::vector<OnticPoint>> enumerate(const ModelContext& ctx) const override;
  [[nodiscard]] std::vector<WeightedPoint> quadrature(std::span<const ModelContext> contexts, std::size_t resolution,
                                                      Stream& rng) const override;
};

/**
 * psi-ontic deterministic model on an interval: bin i has length and density
 * |<e_i|psi>|, and the response is the indicator of the bin. The ontic range
 * is [0, sum_i |<e_i|psi>|]; a boundary point belongs to the lower bin.
 * Sampled points carry the prepared state, which the response depends on, so
 * distinct preparations never share an ontic point.
 * Context: pure state with a projective basis.
 */
class IntervalModel final : public HiddenVariableModel {
 public:
  [[nodiscard]] std::string_view name() const noexcept override { return "interval"; }
  [[nodiscard]] ReferenceMeasure reference_measure() const noexcept override { return ReferenceMeasure::kLebesgue; }
  [[nodiscard]] bool is_deterministic() const noexcept override { return true; }
  [[nodiscard]] std::unique_ptr<const BoundModel> bind(const ModelContext& ctx) const override;
  [[nodiscard]] std::vector<WeightedPoint> quadrature(std::span<const ModelContext> contexts, std::size_t resolution,
                                                      Stream& rng) const override;
};

/**
 * Modified Kochen-Specker model I. Joint density of (lambda_k, v):
 * Theta(k.v) Theta(psi.v) (psi.v) / pi per label, response delta_lk.
 * Context: qubit pure state with a qubit projective basis.
 */
class ModifiedKs1 final : public HiddenVariableModel {
 public:
  [[nodiscard]] std::string_view name() const noexcept override { return "ks1"; }
  [[nodiscard]] ReferenceMeasure reference_measure() const noexcept override {
    return ReferenceMeasure::kCountingTimesSphere;
  }
  [[nodiscard]] bool is_deterministic() const noexcept override { return true; }
  [[nodiscard]] std::unique_ptr<const BoundModel> bind(const ModelContext& ctx) const override;
  [[nodiscard]] std::vector<WeightedPoint> quadrature(std::span<const ModelContext> contexts, std::size_t resolution,
                                                      Stream& rng) const override;
};

/**
 * Modified Kochen-Specker model II: density Theta(v.a) |v.b| / pi on the sphere,
 * outcome +b iff v.b >= 0. The preparation's Bloch vector is a; the axis b is
 * the Bloch vector of the measurement's first element.
 */
class ModifiedKs2 final : public HiddenVariableModel {
 public:
  [[nodiscard]] std::string_view name() const noexcept override { return "ks2"; }
  [[nodiscard]] ReferenceMeasure reference_measure() const noexcept override {
    return ReferenceMeasure::kSphereSurface;
  }
  [[nodiscard]] bool is_deterministic() const noexcept override { return true; }
  [[nodiscard]] std::unique_ptr<const BoundModel> bind(const ModelContext& ctx) const override;
  [[nodiscard]] std::vector<WeightedPoint> quadrature(std::span<const ModelContext> contexts, std::size_t resolution,
                                                      Stream& rng) const override;
};

/**
 * Modified Hall model: antipodal sphere vectors (v, -v), A = Sign(v.a),
 * B = Sign(-v.b). The density of v (delta resolved) is
 *   (1/4pi) (1 + (a.b) s) / (1 + (1 - 2 phi/pi) s),  s = Sign((v.a)(v.b)),
 * with phi the angle between a and b. Aligned and antialigned settings use the
 * exact limit (uniform on the dominant sign region).
 */
class ModifiedHall final : public HiddenVariableModel {
 public:
  [[nodiscard]] std::string_view name() const noexcept override { return "hall"; }
  [[nodiscard]] ReferenceMeasure reference_measure() const noexcept override {
    return ReferenceMeasure::kSphereSurface;
  }
  [[nodiscard]] bool is_deterministic() const noexcept override { return true; }
  [[nodiscard]] bool is_bipartite() const noexcept override { return true; }
  [[nodiscard]] std::unique_ptr<const BoundModel> bind(const ModelContext& ctx) const override;
  [[nodiscard]] std::vector<WeightedPoint> quadrature(std::span<const ModelContext> contexts, std::size_t resolution,
                                                      Stream& rng) const override;

  /// Marginal density of particle 1's or particle 2's vector; both have the same form.
  [[nodiscard]] static double marginal_density(int particle, const BlochVector& v, const QubitPairSettings& settings);
};

/**
 * Modified Bell-Mermin model. Joint density of (lambda_k, v):
 * Theta(k.(psi + v)) / 4pi per label, response delta_lk.
 * Context: qubit pure state with a qubit projective basis.
 */
class ModifiedBellMermin final : public HiddenVariableModel {
 public:
  [[nodiscard]] std::string_view name() const noexcept override { return "bellmermin"; }
  [[nodiscard]] ReferenceMeasure reference_measure() const noexcept override {
    return ReferenceMeasure::kCountingTimesSphere;
  }
  [[nodiscard]] bool is_deterministic() const noexcept override { return true; }
  [[nodiscard]] std::unique_ptr<const BoundModel> bind(const ModelContext& ctx) const override;
  [[nodiscard]] std::vector<WeightedPoint> quadrature(std::span<const ModelContext> contexts, std::size_t resolution,
                                                      Stream& rng) const override;
};

/// Registered names: brans, gbrans, interval, ks1, ks2, hall, bellmermin.
[[nodiscard]] const std::vector<std::string_view>& model_names();

/// Returns nullptr for an unknown name.
[[nodiscard]] std::unique_ptr<HiddenVariableModel> make_model(std::string_view name);

}  // namespace mdhv
