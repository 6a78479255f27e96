#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mdhv/experiment.hpp"
#include "mdhv/model.hpp"

namespace mdhv {

enum class OverlapClass { kDisjoint, kOverlapping };

[[nodiscard]] std::string_view to_string(OverlapClass c) noexcept;

struct OverlapReport {
  double mass_psi_in_phi_support = 0.0;
  double omega = 0.0;  ///< NaN when the states are orthogonal
  double quantum_overlap_sq = 0.0;
  double mc_stderr = 0.0;
  OverlapClass classification = OverlapClass::kDisjoint;
  bool analytic = false;
  std::uint64_t samples = 0;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

enum class OverlapMethod {
  kAuto,        ///< exact sum when the ontic space is finite, sampling otherwise
  kMonteCarlo,  ///< always sample
};

/**
 * Mass of p(. | psi, M) inside the support of p(. | phi, M), and its ratio to
 * |<psi|phi>|^2. Finite ontic spaces are summed exactly unless `method` asks
 * for sampling; others are sampled from the psi context. Throws ContextError
 * when M has no |phi><phi| element.
 */
[[nodiscard]] OverlapReport degree_of_epistemicity(const HiddenVariableModel& model, const StateVector& psi,
                                                   const StateVector& phi, const Povm& m, std::uint64_t samples,
                                                   std::uint64_t seed, const ExecutionOptions& opts = {},
                                                   OverlapMethod method = OverlapMethod::kAuto);

/// 1 - (1/2) integral |p(.|psi,M) - p(.|phi,M)| under the model's reference measure.
[[nodiscard]] double classical_overlap(const HiddenVariableModel& model, const StateVector& psi,
                                       const StateVector& phi, const Povm& m, std::size_t resolution,
                                       std::uint64_t seed);

/// 1 - sqrt(1 - |<psi|phi>|^2).
[[nodiscard]] double quantum_overlap(const StateVector& psi, const StateVector& phi);

struct MassEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

/**
 * Mass of p(. | psi, M) where 0 < p(label | lambda) < 1, weighted by
 * p(label | lambda): the outcome's probability that is not fixed by lambda.
 */
[[nodiscard]] MassEstimate randomness(const HiddenVariableModel& model, const StateVector& psi, const Povm& m,
                                      std::string_view label, std::uint64_t samples, std::uint64_t seed,
                                      const ExecutionOptions& opts = {});

struct ReciprocityReport {
  double violation_mass = 0.0;
  double stderr_ = 0.0;
  bool reciprocal = false;
  std::uint64_t samples = 0;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Fraction of the psi ensemble on which psi's own outcome is not certain. M must contain |psi><psi|.
[[nodiscard]] ReciprocityReport reciprocity_check(const HiddenVariableModel& model, const StateVector& psi,
                                                  const Povm& m, std::uint64_t samples, std::uint64_t seed,
                                                  const ExecutionOptions& opts = {});

struct PiReport {
  std::vector<std::size_t> factor_dims;
  std::vector<std::vector<std::size_t>> tuples;  ///< lambda tuple of each outcome index
  std::vector<double> joint;
  std::vector<double> product_of_marginals;
  std::vector<std::vector<double>> marginals;  ///< per subsystem
  double max_residual = 0.0;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/**
 * Joint lambda distribution of a product preparation under a measurement on the
 * product space against the product of its marginals. Outcome index j maps to
 * the tuple of j's mixed-radix digits, most significant digit = subsystem 1.
 * Needs a model whose ontic space is the outcome index set (DiscreteIndex).
 */
[[nodiscard]] PiReport preparation_independence_residual(const HiddenVariableModel& model,
                                                         const std::vector<StateVector>& factors, const Povm& m);

/// As above for a state given on the product space; throws InvariantError unless it is a product over `dims`.
[[nodiscard]] PiReport preparation_independence_residual(const HiddenVariableModel& model, const StateVector& state,
                                                         const std::vector<std::size_t>& dims, const Povm& m);

/// Splits a product state into its factors; std::nullopt when it is entangled across `dims`.
[[nodiscard]] std::optional<std::vector<StateVector>> factorize(const StateVector& state,
                                                                const std::vector<std::size_t>& dims);

/// p(lambda | rho, M) > eps_support, with mixed preparations expanded into their eigen-ensemble.
[[nodiscard]] bool supports(const OnticPoint& lambda, const Preparation& rho, const Povm& m,
                            const HiddenVariableModel& model);

struct CompatibilityReport {
  std::vector<std::string> lambdas;
  std::vector<std::string> premise_set;  ///< lambda ~ both padded preparations (S_m)
  std::vector<std::string> common_support;  ///< lambda ~ all four product preparations (S)
  bool holds[4] = {false, false, false, false};  ///< conditions (i)..(iv)
  std::vector<std::string> witnesses[4];  ///< lambdas that break each condition
  bool compatible = false;
  std::optional<bool> locally_compatible;
  std::vector<std::string> local_witnesses;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/**
 * Two-system support audit on the enumerable ontic space of `model`. The padded
 * preparations |psi><psi| (x) I are normalized as |psi><psi| (x) I/d. When the
 * single-system measurements are given, also checks local compatibility:
 * lambda_1 ~ (psi, M1) and lambda_2 ~ (phi, M2) imply (lambda_1, lambda_2) ~ (psi (x) phi, M).
 */
[[nodiscard]] CompatibilityReport compatibility_audit(const HiddenVariableModel& model, const StateVector& psi,
                                                      const StateVector& phi, const Povm& m,
                                                      const std::optional<std::pair<Povm, Povm>>& local = {});

struct TvReport {
  double tv = 0.0;
  double stderr_ = 0.0;
  bool exact = false;
  std::size_t points = 0;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/**
 * Total-variation distance between one particle's hidden-variable marginal
 * under settings (a, b) and (a, b'). Exact for Brans; stratified sphere
 * quadrature with a bootstrap error for the Hall model.
 */
[[nodiscard]] TvReport setting_marginal_dependence(const HiddenVariableModel& model, int particle,
                                                   const BlochVector& a, const BlochVector& b,
                                                   const BlochVector& b_alt, std::size_t resolution,
                                                   std::uint64_t seed);

/**
 * Samples lambda_A from (psi, M1) and lambda_B from (phi, M2) independently,
 * records k = j + i * |M2| and returns the largest deviation of the joint
 * frequencies from tr(psi E_i) tr(phi F_j).
 */
[[nodiscard]] double product_measurement_factorization_test(const StateVector& psi, const StateVector& phi,
                                                            const Povm& m1, const Povm& m2,
                                                            const HiddenVariableModel& model, std::uint64_t samples,
                                                            std::uint64_t seed, const ExecutionOptions& opts = {});

}  // namespace mdhv
