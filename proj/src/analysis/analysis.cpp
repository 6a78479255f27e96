#include "mdhv/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "mdhv/errors.hpp"
#include "mdhv/models.hpp"
#include "mdhv/sphere.hpp"

namespace mdhv {

namespace {

std::size_t projector_index(const Povm& m, const StateVector& ket, std::string_view what) {
  const std::size_t idx = m.find_projector(ket);
  if (idx == m.size()) throw ContextError(std::string(what) + ": measurement has no projector onto the given state");
  return idx;
}

/// Running sum and sum of squares of a per-shot quantity.
using Moments = std::array<double, 2>;

MassEstimate finish(const std::vector<Moments>& partials, std::uint64_t samples) {
  Moments total{0.0, 0.0};
  for (const auto& p : partials) {
    total[0] += p[0];
    total[1] += p[1];
  }
  const auto n = static_cast<double>(samples);
  const double mean = total[0] / n;
  const double var = std::max(0.0, total[1] / n - mean * mean);
  return MassEstimate{mean, std::sqrt(var / n), samples};
}

/// Mean of f(lambda) over lambda ~ p(. | ctx).
template <class F>
MassEstimate sample_mean(const BoundModel& bound, std::uint64_t samples, std::uint64_t seed,
                         const ExecutionOptions& opts, F f) {
  if (samples == 0) throw InvariantError("sample count must be at least 1");
  const auto partials = run_blocks<Moments>(samples, seed, opts, [&](std::uint64_t count, Stream& rng) {
    Moments m{0.0, 0.0};
    std::vector<double> scratch(bound.outcome_count());
    for (std::uint64_t s = 0; s < count; ++s) {
      const double v = f(bound.sample(rng), scratch);
      m[0] += v;
      m[1] += v * v;
    }
    return m;
  });
  return finish(partials, samples);
}

Mixture eigen_ensemble(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  Mixture out;
  double total = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()(i);
    if (w <= tol::kArithmetic) continue;
    out.emplace_back(w, StateVector::normalized(es.eigenvectors().col(i)));
    total += w;
  }
  for (auto& [w, s] : out) w /= total;
  return out;
}

std::vector<std::string> describe_all(const std::vector<OnticPoint>& points, const std::vector<bool>& keep) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i]) out.push_back(describe(points[i]));
  }
  return out;
}

}  // namespace

std::string_view to_string(OverlapClass c) noexcept {
  return c == OverlapClass::kDisjoint ? "disjoint" : "overlapping";
}

nlohmann::ordered_json OverlapReport::to_json() const {
  nlohmann::ordered_json j;
  j["mass_psi_in_phi_support"] = mass_psi_in_phi_support;
  j["omega"] = std::isnan(omega) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(omega);
  j["quantum_overlap_sq"] = quantum_overlap_sq;
  j["mc_stderr"] = mc_stderr;
  j["classification"] = std::string(to_string(classification));
  j["analytic"] = analytic;
  j["samples"] = samples;
  return j;
}

OverlapReport degree_of_epistemicity(const HiddenVariableModel& model, const StateVector& psi, const StateVector& phi,
                                     const Povm& m, std::uint64_t samples, std::uint64_t seed,
                                     const ExecutionOptions& opts, OverlapMethod method) {
  const std::size_t phi_idx = projector_index(m, phi, "degree_of_epistemicity");
  const ModelContext psi_ctx(psi, m);
  const ModelContext phi_ctx(phi, m);
  const auto psi_bound = model.bind(psi_ctx);
  const auto phi_bound = model.bind(phi_ctx);

  OverlapReport r;
  // Born probability of the phi outcome is |<psi|phi>|^2, computed the same way the model's weights are.
  r.quantum_overlap_sq = born_probability(psi, m, phi_idx);

  auto points = method == OverlapMethod::kAuto ? model.enumerate(psi_ctx) : std::nullopt;
  if (points) {
    // Mass of p(.|psi) over the common support; a finite sum, so no sampling error.
    double mass = 0.0;
    for (const auto& lambda : *points) {
      if (psi_bound->in_support(lambda) && phi_bound->in_support(lambda)) mass += psi_bound->density(lambda);
    }
    r.mass_psi_in_phi_support = mass;
    r.analytic = true;
    r.classification = mass > 0.0 ? OverlapClass::kOverlapping : OverlapClass::kDisjoint;
  } else {
    const MassEstimate e = sample_mean(*psi_bound, samples, seed, opts, [&](const OnticPoint& lambda, auto&) {
      return phi_bound->in_support(lambda) ? 1.0 : 0.0;
    });
    r.mass_psi_in_phi_support = e.value;
    r.mc_stderr = e.stderr_;
    r.samples = samples;
    r.classification = e.value <= tol::kStatSigmas * e.stderr_ ? OverlapClass::kDisjoint : OverlapClass::kOverlapping;
  }
  r.omega = r.quantum_overlap_sq > 0.0 ? r.mass_psi_in_phi_support / r.quantum_overlap_sq
                                       : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double classical_overlap(const HiddenVariableModel& model, const StateVector& psi, const StateVector& phi,
                         const Povm& m, std::size_t resolution, std::uint64_t seed) {
  const std::array<ModelContext, 2> contexts{ModelContext(psi, m), ModelContext(phi, m)};
  const auto bp = model.bind(contexts[0]);
  const auto bq = model.bind(contexts[1]);
  Stream rng(seed, 0);
  double distance = 0.0;
  for (const auto& wp : model.quadrature(contexts, resolution, rng)) {
    distance += wp.weight * std::abs(bp->density(wp.point) - bq->density(wp.point));
  }
  return 1.0 - 0.5 * distance;
}

double quantum_overlap(const StateVector& psi, const StateVector& phi) {
  return 1.0 - std::sqrt(std::max(0.0, 1.0 - overlap_sq(psi, phi)));
}

MassEstimate randomness(const HiddenVariableModel& model, const StateVector& psi, const Povm& m,
                        std::string_view label, std::uint64_t samples, std::uint64_t seed,
                        const ExecutionOptions& opts) {
  const std::size_t idx = m.index_of(label);
  const auto bound = model.bind(ModelContext(psi, m));
  return sample_mean(*bound, samples, seed, opts, [&](const OnticPoint& lambda, std::vector<double>& resp) {
    bound->respond(lambda, resp);
    const double r = resp[idx];
    return r > 0.0 && r < 1.0 ? r : 0.0;
  });
}

nlohmann::ordered_json ReciprocityReport::to_json() const {
  nlohmann::ordered_json j;
  j["violation_mass"] = violation_mass;
  j["stderr"] = stderr_;
  j["reciprocal"] = reciprocal;
  j["samples"] = samples;
  return j;
}

ReciprocityReport reciprocity_check(const HiddenVariableModel& model, const StateVector& psi, const Povm& m,
                                    std::uint64_t samples, std::uint64_t seed, const ExecutionOptions& opts) {
  const std::size_t idx = projector_index(m, psi, "reciprocity_check");
  const auto bound = model.bind(ModelContext(psi, m));
  const MassEstimate e =
      sample_mean(*bound, samples, seed, opts, [&](const OnticPoint& lambda, std::vector<double>& resp) {
        bound->respond(lambda, resp);
        return resp[idx] < 1.0 - tol::kArithmetic ? 1.0 : 0.0;
      });
  return ReciprocityReport{e.value, e.stderr_, e.value <= tol::kStatSigmas * e.stderr_, samples};
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json PiReport::to_json() const {
  nlohmann::ordered_json j;
  j["factor_dims"] = factor_dims;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    nlohmann::ordered_json row;
    row["lambda"] = tuples[k];
    row["joint"] = joint[k];
    row["product_of_marginals"] = product_of_marginals[k];
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  j["marginals"] = marginals;
  j["max_residual"] = max_residual;
  return j;
}

PiReport preparation_independence_residual(const HiddenVariableModel& model, const std::vector<StateVector>& factors,
                                           const Povm& m) {
  if (factors.empty()) throw InvariantError("preparation_independence_residual: no factors");
  PiReport r;
  StateVector product = factors.front();
  r.factor_dims.push_back(factors.front().dim());
  for (std::size_t i = 1; i < factors.size(); ++i) {
    product = product.tensor(factors[i]);
    r.factor_dims.push_back(factors[i].dim());
  }
  if (m.size() != product.dim()) {
    throw InvariantError("preparation_independence_residual: outcome count must equal the product of factor dims");
  }

  const auto bound = model.bind(ModelContext(product, m));
  const std::size_t n = m.size();
  r.marginals.resize(factors.size());
  for (std::size_t s = 0; s < factors.size(); ++s) r.marginals[s].assign(r.factor_dims[s], 0.0);

  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> tuple(factors.size());
    std::size_t rest = k;
    for (std::size_t s = factors.size(); s-- > 0;) {
      tuple[s] = rest % r.factor_dims[s];
      rest /= r.factor_dims[s];
    }
    const double p = bound->density(DiscreteIndex{k});
    r.tuples.push_back(tuple);
    r.joint.push_back(p);
    total += p;
    for (std::size_t s = 0; s < factors.size(); ++s) r.marginals[s][tuple[s]] += p;
  }
  if (std::abs(total - 1.0) > tol::kStructural) {
    throw InvariantError("preparation_independence_residual: joint distribution is not normalized");
  }

  for (std::size_t k = 0; k < n; ++k) {
    double prod = 1.0;
    for (std::size_t s = 0; s < factors.size(); ++s) prod *= r.marginals[s][r.tuples[k][s]];
    r.product_of_marginals.push_back(prod);
    r.max_residual = std::max(r.max_residual, std::abs(r.joint[k] - prod));
  }
  return r;
}

std::optional<std::vector<StateVector>> factorize(const StateVector& state, const std::vector<std::size_t>& dims) {
  if (dims.empty()) throw InvariantError("factorize: no factor dimensions");
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != state.dim()) throw DimensionError("factorize: factor dimensions do not match the state");

  std::vector<StateVector> out;
  CVector rest = state.amplitudes();
  for (std::size_t s = 0; s + 1 < dims.size(); ++s) {
    const auto rows = static_cast<Eigen::Index>(dims[s]);
    const Eigen::Index cols = rest.size() / rows;
    // Row-major reshape: amplitude index = i * cols + r.
    CMatrix mat(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index c = 0; c < cols; ++c) mat(i, c) = rest(i * cols + c);
    }
    Eigen::JacobiSVD<CMatrix> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() > 1 && sv(1) > tol::kStructural) return std::nullopt;
    out.push_back(StateVector::normalized(svd.matrixU().col(0)));
    rest = svd.matrixV().col(0).conjugate();
  }
  out.push_back(StateVector::normalized(rest));
  return out;
}

PiReport preparation_independence_residual(const HiddenVariableModel& model, const StateVector& state,
                                           const std::vector<std::size_t>& dims, const Povm& m) {
  auto factors = factorize(state, dims);
  if (!factors) throw InvariantError("preparation_independence_residual: preparation is not a product state");
  return preparation_independence_residual(model, *factors, m);
}

bool supports(const OnticPoint& lambda, const Preparation& rho, const Povm& m, const HiddenVariableModel& model) {
  if (const auto* psi = std::get_if<StateVector>(&rho)) return model.in_support(lambda, ModelContext(*psi, m));
  if (const auto* mixed = std::get_if<DensityMatrix>(&rho)) {
    return mixture_density(model, eigen_ensemble(*mixed), m, lambda) > tol::kSupport;
  }
  throw UnsupportedError("supports: the singlet tag is measured with qubit-pair settings, not a Povm");
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json CompatibilityReport::to_json() const {
  static constexpr std::array<std::string_view, 4> names{"i", "ii", "iii", "iv"};
  nlohmann::ordered_json j;
  j["lambdas"] = lambdas;
  j["premise_set"] = premise_set;
  j["common_support"] = common_support;
  nlohmann::ordered_json conds = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < 4; ++c) {
    conds[std::string(names[c])] = {{"holds", holds[c]}, {"witnesses", witnesses[c]}};
  }
  j["conditions"] = std::move(conds);
  j["compatible"] = compatible;
  j["locally_compatible"] = locally_compatible ? nlohmann::ordered_json(*locally_compatible) : nullptr;
  j["local_witnesses"] = local_witnesses;
  return j;
}

CompatibilityReport compatibility_audit(const HiddenVariableModel& model, const StateVector& psi,
                                        const StateVector& phi, const Povm& m,
                                        const std::optional<std::pair<Povm, Povm>>& local) {
  if (psi.dim() != phi.dim()) throw DimensionError("compatibility_audit: states differ in dimension");
  const std::size_t d = psi.dim();
  if (m.dim() != d * d) throw DimensionError("compatibility_audit: measurement must act on the two-system space");

  const StateVector psi_phi = psi.tensor(phi);
  auto enumerated = model.enumerate(ModelContext(psi_phi, m));
  if (!enumerated) throw UnsupportedError("compatibility_audit: model has no enumerable ontic space");
  const std::vector<OnticPoint>& points = *enumerated;

  const DensityMatrix pad_psi = psi.density().tensor(DensityMatrix::maximally_mixed(d));
  const DensityMatrix pad_phi = phi.density().tensor(DensityMatrix::maximally_mixed(d));
  // Conditions (i)..(iv): psi(x)phi, phi(x)psi, psi(x)psi, phi(x)phi.
  const std::array<StateVector, 4> products{psi_phi, phi.tensor(psi), psi.tensor(psi), phi.tensor(phi)};

  CompatibilityReport r;
  const std::size_t n = points.size();
  std::vector<bool> premise(n), common(n);
  for (std::size_t c = 0; c < 4; ++c) r.holds[c] = true;
  for (std::size_t i = 0; i < n; ++i) {
    const OnticPoint& lambda = points[i];
    r.lambdas.push_back(describe(lambda));
    const bool a = supports(lambda, pad_psi, m, model);
    const bool b = supports(lambda, pad_phi, m, model);
    std::array<bool, 4> s{};
    for (std::size_t c = 0; c < 4; ++c) s[c] = supports(lambda, products[c], m, model);
    premise[i] = a && b;
    common[i] = s[0] && s[1] && s[2] && s[3];
    const std::array<bool, 4> required{premise[i], premise[i], a, b};
    for (std::size_t c = 0; c < 4; ++c) {
      if (required[c] && !s[c]) {
        r.holds[c] = false;
        r.witnesses[c].push_back(describe(lambda));
      }
    }
  }
  r.premise_set = describe_all(points, premise);
  r.common_support = describe_all(points, common);
  r.compatible = r.holds[0] && r.holds[1] && r.holds[2] && r.holds[3];

  if (local) {
    const auto& [m1, m2] = *local;
    if (m1.dim() * m2.dim() != m.dim() || m1.size() * m2.size() != m.size()) {
      throw DimensionError("compatibility_audit: local measurements do not compose to the joint one");
    }
    bool ok = true;
    for (const auto& lambda : points) {
      const auto* idx = std::get_if<DiscreteIndex>(&lambda);
      if (idx == nullptr) throw UnsupportedError("compatibility_audit: local check needs indexed ontic states");
      const DiscreteIndex l1{idx->j / m2.size()};
      const DiscreteIndex l2{idx->j % m2.size()};
      if (supports(l1, psi, m1, model) && supports(l2, phi, m2, model) && !supports(lambda, psi_phi, m, model)) {
        ok = false;
        r.local_witnesses.push_back(describe(lambda));
      }
    }
    r.locally_compatible = ok;
  }
  return r;
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json TvReport::to_json() const {
  nlohmann::ordered_json j;
  j["tv"] = tv;
  j["stderr"] = stderr_;
  j["exact"] = exact;
  j["points"] = points;
  return j;
}

TvReport setting_marginal_dependence(const HiddenVariableModel& model, int particle, const BlochVector& a,
                                     const BlochVector& b, const BlochVector& b_alt, std::size_t resolution,
                                     std::uint64_t seed) {
  if (particle != 1 && particle != 2) throw LabelError("setting_marginal_dependence: particle must be 1 or 2");
  const QubitPairSettings first{a, b};
  const QubitPairSettings second{a, b_alt};

  if (dynamic_cast<const BransSinglet*>(&model) != nullptr) {
    double tv = 0.0;
    for (int i : {1, -1}) {
      tv += std::abs(BransSinglet::marginal_density(particle, i, first) -
                     BransSinglet::marginal_density(particle, i, second));
    }
    return TvReport{0.5 * tv, 0.0, true, 2};
  }

  if (dynamic_cast<const ModifiedHall*>(&model) != nullptr) {
    Stream rng(seed, 0);
    const auto points = sphere::stratified(resolution, rng);
    std::vector<double> g(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      g[i] = std::abs(ModifiedHall::marginal_density(particle, points[i], first) -
                      ModifiedHall::marginal_density(particle, points[i], second));
    }
    const double scale = 0.5 * sphere::kArea / static_cast<double>(points.size());
    const double tv = scale * std::accumulate(g.begin(), g.end(), 0.0);

    // Bootstrap over quadrature points.
    constexpr int kResamples = 64;
    Stream boot(seed, 1);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int rep = 0; rep < kResamples; ++rep) {
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        acc += g[static_cast<std::size_t>(boot.uniform() * static_cast<double>(g.size()))];
      }
      const double est = scale * acc;
      sum += est;
      sum_sq += est * est;
    }
    const double mean = sum / kResamples;
    const double var = std::max(0.0, sum_sq / kResamples - mean * mean);
    return TvReport{tv, std::sqrt(var), false, points.size()};
  }

  throw UnsupportedError("setting_marginal_dependence: defined for the two-party singlet models (brans, hall)");
}

double product_measurement_factorization_test(const StateVector& psi, const StateVector& phi, const Povm& m1,
                                              const Povm& m2, const HiddenVariableModel& model,
                                              std::uint64_t samples, std::uint64_t seed,
                                              const ExecutionOptions& opts) {
  if (samples == 0) throw InvariantError("product_measurement_factorization_test: samples must be at least 1");
  const auto first = model.bind(ModelContext(psi, m1));
  const auto second = model.bind(ModelContext(phi, m2));
  const std::size_t n1 = m1.size();
  const std::size_t n2 = m2.size();

  const auto partials =
      run_blocks<std::vector<std::uint64_t>>(samples, seed, opts, [&](std::uint64_t count, Stream& rng) {
        std::vector<std::uint64_t> c(n1 * n2, 0);
        for (std::uint64_t s = 0; s < count; ++s) {
          const std::size_t i = first->draw_outcome(first->sample(rng), rng);
          const std::size_t j = second->draw_outcome(second->sample(rng), rng);
          ++c[i * n2 + j];
        }
        return c;
      });
  std::vector<std::uint64_t> counts(n1 * n2, 0);
  for (const auto& p : partials) {
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += p[k];
  }

  const auto pa = born_probabilities(psi, m1);
  const auto pb = born_probabilities(phi, m2);
  double worst = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double freq = static_cast<double>(counts[i * n2 + j]) / static_cast<double>(samples);
      worst = std::max(worst, std::abs(freq - pa[i] * pb[j]));
    }
  }
  return worst;
}

}  // namespace mdhv
