#include "mdhv/experiment.hpp"

#include <cmath>

#include "mdhv/errors.hpp"

namespace mdhv {

double SimulationReport::estimate(std::string_view label) const {
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == label) return estimates[k];
  }
  throw LabelError("report has no outcome '" + std::string(label) + "'");
}

double SimulationReport::max_z_score() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const double diff = std::abs(estimates[k] - born_reference[k]);
    if (stderr_[k] > 0.0) {
      worst = std::max(worst, diff / stderr_[k]);
    } else if (diff > tol::kStructural) {
      worst = std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

nlohmann::ordered_json SimulationReport::to_json() const {
  nlohmann::ordered_json counts_j = nlohmann::ordered_json::object();
  nlohmann::ordered_json est_j = nlohmann::ordered_json::object();
  nlohmann::ordered_json err_j = nlohmann::ordered_json::object();
  nlohmann::ordered_json born_j = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    counts_j[labels[k]] = counts[k];
    est_j[labels[k]] = estimates[k];
    err_j[labels[k]] = stderr_[k];
    born_j[labels[k]] = born_reference[k];
  }
  nlohmann::ordered_json j;
  j["shots"] = shots;
  j["seed"] = seed;
  j["counts"] = std::move(counts_j);
  j["estimates"] = std::move(est_j);
  j["stderr"] = std::move(err_j);
  j["born_reference"] = std::move(born_j);
  return j;
}

SimulationReport run_experiment(const HiddenVariableModel& model, const ModelContext& ctx, std::uint64_t shots,
                                std::uint64_t seed, const ExecutionOptions& opts) {
  if (shots == 0) throw InvariantError("run_experiment: shots must be at least 1");
  const auto bound = model.bind(ctx);
  const std::size_t outcomes = bound->outcome_count();

  const auto partials = run_blocks<std::vector<std::uint64_t>>(
      shots, seed, opts, [&](std::uint64_t count, Stream& rng) {
        std::vector<std::uint64_t> c(outcomes, 0);
        for (std::uint64_t s = 0; s < count; ++s) {
          const OnticPoint lambda = bound->sample(rng);
          ++c[bound->draw_outcome(lambda, rng)];
        }
        return c;
      });

  SimulationReport r;
  r.shots = shots;
  r.seed = seed;
  r.labels = bound->outcome_labels();
  r.born_reference = bound->born_reference();
  r.counts.assign(outcomes, 0);
  for (const auto& p : partials) {
    for (std::size_t k = 0; k < outcomes; ++k) r.counts[k] += p[k];
  }
  const auto n = static_cast<double>(shots);
  for (std::size_t k = 0; k < outcomes; ++k) {
    r.estimates.push_back(static_cast<double>(r.counts[k]) / n);
    const double p = r.born_reference[k];
    r.stderr_.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return r;
}

Correlation pair_correlation(const SimulationReport& report) {
  if (report.labels != pair_outcome_labels()) throw UnsupportedError("pair_correlation: not a two-party report");
  const double e = report.estimates[0] - report.estimates[1] - report.estimates[2] + report.estimates[3];
  return Correlation{e, std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(report.shots))};
}

}  // namespace mdhv
