#pragma once

// Generalized Brans with a depolarized response: p(k | lambda_j) = (1 - eta)
// delta_jk + eta / d. Keeps the ontic space and density but makes the model
// indeterministic, which is what the randomness and reciprocity audits need.

#include <algorithm>
#include <memory>

#include "mdhv/models.hpp"

namespace testing_support {

class NoisyBound final : public mdhv::BoundModel {
 public:
  NoisyBound(const mdhv::ModelContext& ctx, std::unique_ptr<const mdhv::BoundModel> inner, double eta)
      : mdhv::BoundModel(ctx), inner_(std::move(inner)), eta_(eta) {
    const auto& born = inner_->born_reference();
    std::vector<double> mixed(born.size());
    for (std::size_t k = 0; k < born.size(); ++k) mixed[k] = (1.0 - eta_) * born[k] + eta_ / born.size();
    set_outcomes(inner_->outcome_labels(), mixed);
  }

  mdhv::OnticPoint sample(mdhv::Stream& rng) const override { return inner_->sample(rng); }
  double density(const mdhv::OnticPoint& lambda) const override { return inner_->density(lambda); }

  void respond(const mdhv::OnticPoint& lambda, std::span<double> out) const override {
    inner_->respond(lambda, out);
    const double floor = eta_ / static_cast<double>(out.size());
    std::transform(out.begin(), out.end(), out.begin(), [&](double r) { return (1.0 - eta_) * r + floor; });
  }

 private:
  std::unique_ptr<const mdhv::BoundModel> inner_;
  double eta_;
};

class NoisyBrans final : public mdhv::HiddenVariableModel {
 public:
  explicit NoisyBrans(double eta) : eta_(eta) {}

  std::string_view name() const noexcept override { return "noisy-gbrans"; }
  mdhv::ReferenceMeasure reference_measure() const noexcept override { return inner_.reference_measure(); }
  bool is_deterministic() const noexcept override { return false; }

  std::unique_ptr<const mdhv::BoundModel> bind(const mdhv::ModelContext& ctx) const override {
    return std::make_unique<NoisyBound>(ctx, inner_.bind(ctx), eta_);
  }
  std::optional<std::vector<mdhv::OnticPoint>> enumerate(const mdhv::ModelContext& ctx) const override {
    return inner_.enumerate(ctx);
  }
  std::vector<mdhv::WeightedPoint> quadrature(std::span<const mdhv::ModelContext> contexts, std::size_t resolution,
                                              mdhv::Stream& rng) const override {
    return inner_.quadrature(contexts, resolution, rng);
  }

 private:
  mdhv::GeneralizedBrans inner_;
  double eta_;
};

}  // namespace testing_support
