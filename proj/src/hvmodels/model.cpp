#include "mdhv/model.hpp"

#include "mdhv/errors.hpp"
#include "mdhv/models.hpp"

namespace mdhv {

std::string_view to_string(ReferenceMeasure m) noexcept {
  switch (m) {
    case ReferenceMeasure::kCounting:
      return "counting";
    case ReferenceMeasure::kLebesgue:
      return "lebesgue";
    case ReferenceMeasure::kSphereSurface:
      return "sphere-surface";
    case ReferenceMeasure::kCountingTimesSphere:
      return "counting-x-sphere";
  }
  return "unknown";
}

BoundModel::BoundModel(ModelContext ctx) : ctx_(std::move(ctx)) {}

void BoundModel::set_outcomes(std::vector<std::string> labels, std::vector<double> born) {
  labels_ = std::move(labels);
  born_ = std::move(born);
}

std::vector<double> BoundModel::respond(const OnticPoint& lambda) const {
  std::vector<double> out(outcome_count(), 0.0);
  respond(lambda, out);
  return out;
}

std::size_t BoundModel::draw_outcome(const OnticPoint& lambda, Stream& rng) const {
  return rng.categorical(respond(lambda));
}

std::optional<std::vector<OnticPoint>> HiddenVariableModel::enumerate(const ModelContext&) const {
  return std::nullopt;
}

OnticPoint HiddenVariableModel::sample(const ModelContext& ctx, Stream& rng) const { return bind(ctx)->sample(rng); }

double HiddenVariableModel::density(const OnticPoint& lambda, const ModelContext& ctx) const {
  return bind(ctx)->density(lambda);
}

std::vector<double> HiddenVariableModel::respond(const OnticPoint& lambda, const ModelContext& ctx) const {
  return bind(ctx)->respond(lambda);
}

bool HiddenVariableModel::in_support(const OnticPoint& lambda, const ModelContext& ctx) const {
  return bind(ctx)->in_support(lambda);
}

double mixture_density(const HiddenVariableModel& model, const Mixture& mixture, const Povm& m,
                       const OnticPoint& lambda) {
  if (mixture.empty()) throw InvariantError("mixture_density: empty mixture");
  double total_weight = 0.0;
  double out = 0.0;
  for (const auto& [w, psi] : mixture) {
    if (psi.dim() != m.dim()) throw DimensionError("mixture_density: component dimension differs from measurement");
    if (w < 0.0) throw InvariantError("mixture_density: negative weight");
    total_weight += w;
    if (w > 0.0) out += w * model.density(lambda, ModelContext(psi, m));
  }
  if (std::abs(total_weight - 1.0) > tol::kStructural) throw InvariantError("mixture_density: weights do not sum to 1");
  return out;
}

const std::vector<std::string>& pair_outcome_labels() {
  static const std::vector<std::string> labels{"++", "+-", "-+", "--"};
  return labels;
}

const std::vector<std::string_view>& model_names() {
  static const std::vector<std::string_view> names{"brans", "gbrans", "interval", "ks1", "ks2", "hall", "bellmermin"};
  return names;
}

std::unique_ptr<HiddenVariableModel> make_model(std::string_view name) {
  if (name == "brans") return std::make_unique<BransSinglet>();
  if (name == "gbrans") return std::make_unique<GeneralizedBrans>();
  if (name == "interval") return std::make_unique<IntervalModel>();
  if (name == "ks1") return std::make_unique<ModifiedKs1>();
  if (name == "ks2") return std::make_unique<ModifiedKs2>();
  if (name == "hall") return std::make_unique<ModifiedHall>();
  if (name == "bellmermin") return std::make_unique<ModifiedBellMermin>();
  return nullptr;
}

}  // namespace mdhv
