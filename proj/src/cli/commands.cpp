#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdhv/analysis.hpp"
#include "mdhv/channel.hpp"
#include "mdhv/cli.hpp"
#include "mdhv/errors.hpp"
#include "mdhv/experiment.hpp"
#include "mdhv/models.hpp"
#include "mdhv/random.hpp"

namespace mdhv::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string check;
  std::string model;
  std::uint64_t shots = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string angles;
  std::string alice;
  std::string bob;
  std::string bob_alt;
  std::uint64_t accepted = 0;
  std::size_t dim = 2;
  std::string output;
  std::string format;
  std::size_t threads = 0;
  std::string trace;
  std::string state;
  std::string phi;
  std::string basis;
  std::string outcome;
  int particle = 0;
  bool monte_carlo = false;
  std::size_t resolution = 0;

  [[nodiscard]] json to_json() const {
    json j;
    j["command"] = command;
    if (!check.empty()) j["check"] = check;
    if (!model.empty()) j["model"] = model;
    j["seed"] = seed;
    if (shots != 0) j["shots"] = shots;
    if (trials != 0) j["trials"] = trials;
    if (!angles.empty()) j["angles"] = angles;
    if (!alice.empty()) j["alice"] = alice;
    if (!bob.empty()) j["bob"] = bob;
    if (!bob_alt.empty()) j["bob_alt"] = bob_alt;
    if (accepted != 0) j["accepted"] = accepted;
    j["dim"] = dim;
    if (!state.empty()) j["state"] = state;
    if (!phi.empty()) j["phi"] = phi;
    if (!basis.empty()) j["basis"] = basis;
    if (!outcome.empty()) j["outcome"] = outcome;
    if (particle != 0) j["particle"] = particle;
    if (monte_carlo) j["monte_carlo"] = true;
    if (resolution != 0) j["resolution"] = resolution;
    j["threads"] = threads;
    if (!trace.empty()) j["trace"] = trace;
    j["format"] = format;
    return j;
  }
};

/// A command's result: JSON payload plus the same data as a flat table.
struct Output {
  json result;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int status = kExitPass;
};

// ---------------------------------------------------------------------------
// Formatting

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string num(std::uint64_t v) { return std::to_string(v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string config_line(const RunConfig& cfg) { return "# config " + cfg.to_json().dump(); }

void emit(const RunConfig& cfg, const Output& o, std::ostream& out) {
  if (cfg.format == "json") {
    json j;
    j["config"] = cfg.to_json();
    j["result"] = o.result;
    j["status"] = o.status == kExitPass ? "pass" : "fail";
    out << j.dump(2) << '\n';
    return;
  }
  out << config_line(cfg) << '\n';
  if (cfg.format == "csv") {
    for (std::size_t i = 0; i < o.header.size(); ++i) out << (i ? "," : "") << csv_field(o.header[i]);
    out << '\n';
    for (const auto& row : o.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(o.header.size());
  for (std::size_t i = 0; i < o.header.size(); ++i) width[i] = o.header[i].size();
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "  " : "") << cells[i];
      if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size(), ' ');
    }
    out << '\n';
  };
  line(o.header);
  for (const auto& row : o.rows) line(row);
  out << "# status " << (o.status == kExitPass ? "pass" : "fail") << '\n';
}

// ---------------------------------------------------------------------------
// Parsing

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first < last && *first == ' ') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw UsageError("not a number: '" + token + "'");
  return v;
}

/// "theta,phi" in degrees or "x,y,z".
BlochVector parse_vector(const std::string& s) {
  const auto parts = split(s, ',');
  std::vector<double> v;
  for (const auto& p : parts) v.push_back(parse_double(p));
  constexpr double kDeg = std::numbers::pi / 180.0;
  try {
    if (v.size() == 2) return BlochVector::from_angles(v[0] * kDeg, v[1] * kDeg);
    if (v.size() == 3) return BlochVector::from_components(v[0], v[1], v[2]);
  } catch (const Error& e) {
    throw UsageError("bad vector '" + s + "': " + e.what());
  }
  throw UsageError("vector '" + s + "' needs 2 (theta,phi degrees) or 3 (x,y,z) components");
}

std::optional<StateVector> named_ket(std::string_view s) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  auto ket = [](Complex a, Complex b) { return StateVector((CVector(2) << a, b).finished()); };
  if (s == "0") return StateVector::basis(2, 0);
  if (s == "1") return StateVector::basis(2, 1);
  if (s == "+") return ket(r, r);
  if (s == "-") return ket(r, -r);
  if (s == "+i") return ket(r, i * r);
  if (s == "-i") return ket(r, -i * r);
  return std::nullopt;
}

/// Named qubit ket, Bloch vector, or a random state of `dim` when empty.
StateVector parse_state(const std::string& s, std::size_t dim, Stream& rng) {
  if (s.empty()) return random_state(dim, rng);
  if (auto k = named_ket(s)) return *k;
  return ket_from_bloch(parse_vector(s));
}

/// Comma list of named kets ("+,0"), one factor each.
std::optional<std::vector<StateVector>> parse_factors(const std::string& s) {
  std::vector<StateVector> out;
  for (const auto& t : split(s, ',')) {
    auto k = named_ket(t);
    if (!k) return std::nullopt;
    out.push_back(*k);
  }
  return out;
}

Povm qubit_basis(char c) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  auto ket = [](Complex a, Complex b) { return StateVector((CVector(2) << a, b).finished()); };
  switch (c) {
    case 'z':
      return Povm::computational(2);
    case 'x':
      return Povm::from_kets({{"+", ket(r, r)}, {"-", ket(r, -r)}});
    case 'y':
      return Povm::from_kets({{"+i", ket(r, i * r)}, {"-i", ket(r, -i * r)}});
    default:
      throw UsageError(std::string("unknown qubit basis '") + c + "'");
  }
}

struct ParsedBasis {
  Povm povm;
  std::optional<std::pair<Povm, Povm>> local;
};

StateVector ket4(Complex a, Complex b, Complex c, Complex d) {
  return StateVector::normalized((CVector(4) << a, b, c, d).finished());
}

ParsedBasis parse_basis(const std::string& name, std::size_t dim) {
  const bool qubit_letter = name.size() == 1 && std::string_view("zxy").find(name[0]) != std::string_view::npos;
  if (qubit_letter) return {qubit_basis(name[0]), std::nullopt};
  if (name.size() == 2 && std::string_view("zxy").find(name[0]) != std::string_view::npos &&
      std::string_view("zxy").find(name[1]) != std::string_view::npos) {
    Povm a = qubit_basis(name[0]);
    Povm b = qubit_basis(name[1]);
    Povm joint = a.tensor(b);
    return {std::move(joint), std::make_pair(std::move(a), std::move(b))};
  }
  if (name == "computational") return {Povm::computational(dim), std::nullopt};
  if (name == "bell") {
    return {Povm::from_kets({{"phi+", ket4(1, 0, 0, 1)},
                             {"phi-", ket4(1, 0, 0, -1)},
                             {"psi+", ket4(0, 1, 1, 0)},
                             {"psi-", ket4(0, 1, -1, 0)}}),
            std::nullopt};
  }
  if (name == "mixed-psi-plus") {
    return {Povm::from_kets(
                {{"00", ket4(1, 0, 0, 0)}, {"01", ket4(0, 1, 0, 0)}, {"1+", ket4(0, 0, 1, 1)}, {"1-", ket4(0, 0, 1, -1)}}),
            std::nullopt};
  }
  if (name == "pbr") {
    // Each element is orthogonal to one of |00>, |0+>, |+0>, |++>.
    return {Povm::from_kets({{"xi1", ket4(0, 1, 1, 0)},
                             {"xi2", ket4(1, -1, 1, 1)},
                             {"xi3", ket4(1, 1, -1, 1)},
                             {"xi4", ket4(1, 0, 0, -1)}}),
            std::nullopt};
  }
  if (name.find(',') != std::string::npos) return {Povm::qubit_axis(parse_vector(name)), std::nullopt};
  throw UsageError("unknown basis '" + name + "'");
}

std::unique_ptr<HiddenVariableModel> require_model(const std::string& name) {
  if (name.empty()) throw UsageError("a model name is required");
  auto m = make_model(name);
  if (!m) {
    std::string names;
    for (auto n : model_names()) names += (names.empty() ? "" : ", ") + std::string(n);
    throw UsageError("unknown model '" + name + "' (known: " + names + ")");
  }
  return m;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (trial + 1));
}

ExecutionOptions exec(const RunConfig& cfg) { return ExecutionOptions{cfg.threads}; }

// ---------------------------------------------------------------------------
// Commands

Output cmd_verify(const RunConfig& cfg) {
  const auto model = require_model(cfg.model);
  const bool pair = model->is_bipartite();
  Stream ctx_rng(cfg.seed, ~0ULL);
  Output o;
  // Two-party models get one row per context with the correlation; others one row per outcome.
  if (pair) {
    o.header = {"trial", "angle_deg", "p++", "p+-", "p-+", "p--", "<AB>", "-cos", "stderr", "max_z"};
  } else {
    o.header = {"trial", "context", "outcome", "estimate", "born_reference", "stderr", "z"};
  }
  json trials = json::array();
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    const ModelContext ctx = random_context(*model, cfg.dim, ctx_rng);
    const SimulationReport r = run_experiment(*model, ctx, cfg.shots, trial_seed(cfg.seed, t), exec(cfg));
    const double z = r.max_z_score();
    const bool pass = z <= tol::kStatSigmas;
    if (!pass) o.status = kExitStatisticalFail;
    json tj;
    tj["trial"] = t;
    tj["context"] = ctx.describe();
    tj["report"] = r.to_json();
    tj["max_z"] = z;
    if (pair) {
      const Correlation c = pair_correlation(r);
      const QubitPairSettings& s = *ctx.settings();
      const double expected = singlet_expectation(s.a, s.b);
      const double angle = s.a.angle_to(s.b) * 180.0 / std::numbers::pi;
      tj["correlation"] = {{"angle_deg", angle}, {"estimate", c.value}, {"expected", expected}, {"stderr", c.stderr_}};
      o.rows.push_back({num(t), num(angle), num(r.estimates[0]), num(r.estimates[1]), num(r.estimates[2]),
                        num(r.estimates[3]), num(c.value), num(expected), num(c.stderr_), num(z)});
    } else {
      for (std::size_t k = 0; k < r.labels.size(); ++k) {
        const double zk = r.stderr_[k] > 0.0 ? std::abs(r.estimates[k] - r.born_reference[k]) / r.stderr_[k] : 0.0;
        o.rows.push_back({num(t), ctx.describe(), r.labels[k], num(r.estimates[k]), num(r.born_reference[k]),
                          num(r.stderr_[k]), num(zk)});
      }
    }
    tj["pass"] = pass;
    trials.push_back(std::move(tj));
  }
  o.result["trials"] = std::move(trials);
  return o;
}

Output cmd_scan(const RunConfig& cfg) {
  const auto model = require_model(cfg.model);
  if (!model->is_bipartite()) throw UsageError("scan needs a two-party model (brans, hall)");
  std::vector<double> angles;
  if (cfg.angles.empty()) {
    for (int a = 0; a <= 180; a += 15) angles.push_back(a);
  } else {
    for (const auto& t : split(cfg.angles, ',')) angles.push_back(parse_double(t));
  }
  Output o;
  o.header = {"angle", "estimate", "minus_cos", "stderr"};
  json rows = json::array();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double rad = angles[i] * std::numbers::pi / 180.0;
    const BlochVector a = BlochVector::z_axis();
    const BlochVector b = BlochVector::from_angles(rad, 0.0);
    const auto r = run_experiment(*model, ModelContext::singlet(a, b), cfg.shots, trial_seed(cfg.seed, i), exec(cfg));
    const Correlation c = pair_correlation(r);
    const double expected = -std::cos(rad);
    const double dev = std::abs(c.value - expected);
    if (dev > std::max(tol::kStatSigmas * c.stderr_, tol::kStructural)) o.status = kExitStatisticalFail;
    o.rows.push_back({num(angles[i]), num(c.value), num(expected), num(c.stderr_)});
    rows.push_back({{"angle", angles[i]}, {"estimate", c.value}, {"minus_cos", expected}, {"stderr", c.stderr_}});
  }
  o.result["rows"] = std::move(rows);
  return o;
}

Output cmd_epistemicity(const RunConfig& cfg) {
  const auto model = require_model(cfg.model);
  const std::size_t dim = is_qubit_model(*model) ? 2 : cfg.dim;
  Stream rng(cfg.seed, ~0ULL);
  Output o;
  o.header = {"trial", "mass", "omega", "quantum_overlap_sq", "stderr", "classification", "analytic"};
  json trials = json::array();
  const std::uint64_t count = cfg.state.empty() ? cfg.trials : 1;
  for (std::uint64_t t = 0; t < count; ++t) {
    const StateVector psi = parse_state(cfg.state, dim, rng);
    const StateVector phi = parse_state(cfg.phi, dim, rng);
    const Povm m = cfg.basis.empty() ? basis_containing(phi, rng) : parse_basis(cfg.basis, dim).povm;
    const auto r = degree_of_epistemicity(*model, psi, phi, m, cfg.shots, trial_seed(cfg.seed, t), exec(cfg),
                                          cfg.monte_carlo ? OverlapMethod::kMonteCarlo : OverlapMethod::kAuto);
    o.rows.push_back({num(t), num(r.mass_psi_in_phi_support), num(r.omega), num(r.quantum_overlap_sq),
                      num(r.mc_stderr), std::string(to_string(r.classification)), r.analytic ? "yes" : "no"});
    json tj = r.to_json();
    tj["trial"] = t;
    trials.push_back(std::move(tj));
  }
  o.result["trials"] = std::move(trials);
  return o;
}

Output cmd_randomness(const RunConfig& cfg) {
  const auto model = require_model(cfg.model);
  const std::size_t dim = is_qubit_model(*model) ? 2 : cfg.dim;
  Stream rng(cfg.seed, ~0ULL);
  const StateVector psi = parse_state(cfg.state, dim, rng);
  const Povm m = cfg.basis.empty() ? random_basis(dim, rng) : parse_basis(cfg.basis, dim).povm;
  Output o;
  o.header = {"outcome", "randomness", "stderr"};
  json rows = json::array();
  for (const auto& label : m.labels()) {
    if (!cfg.outcome.empty() && label != cfg.outcome) continue;
    const MassEstimate e = randomness(*model, psi, m, label, cfg.shots, cfg.seed, exec(cfg));
    o.rows.push_back({label, num(e.value), num(e.stderr_)});
    rows.push_back({{"outcome", label}, {"randomness", e.value}, {"stderr", e.stderr_}});
  }
  if (o.rows.empty()) throw UsageError("no outcome labeled '" + cfg.outcome + "'");
  o.result["deterministic"] = model->is_deterministic();
  o.result["outcomes"] = std::move(rows);
  return o;
}

Output cmd_reciprocity(const RunConfig& cfg) {
  const auto model = require_model(cfg.model);
  const std::size_t dim = is_qubit_model(*model) ? 2 : cfg.dim;
  Stream rng(cfg.seed, ~0ULL);
  const StateVector psi = parse_state(cfg.state, dim, rng);
  const Povm m = cfg.basis.empty() ? basis_containing(psi, rng) : parse_basis(cfg.basis, dim).povm;
  const auto r = reciprocity_check(*model, psi, m, cfg.shots, cfg.seed, exec(cfg));
  Output o;
  o.header = {"violation_mass", "stderr", "reciprocal"};
  o.rows.push_back({num(r.violation_mass), num(r.stderr_), r.reciprocal ? "yes" : "no"});
  o.result = r.to_json();
  return o;
}

Output cmd_pi(const RunConfig& cfg) {
  const auto model = require_model(cfg.model.empty() ? "gbrans" : cfg.model);
  const std::string state = cfg.state.empty() ? "+,0" : cfg.state;
  auto factors = parse_factors(state);
  if (!factors) throw UsageError("--state for pi takes named qubit kets, e.g. \"+,0\"");
  std::size_t total = 1;
  for (const auto& f : *factors) total *= f.dim();
  const Povm m = parse_basis(cfg.basis.empty() ? "mixed-psi-plus" : cfg.basis, total).povm;
  if (m.dim() != total) throw UsageError("basis dimension does not match the product of the factors");
  const PiReport r = preparation_independence_residual(*model, *factors, m);
  Output o;
  o.header = {"lambda", "joint", "product_of_marginals", "residual"};
  for (std::size_t k = 0; k < r.tuples.size(); ++k) {
    std::string tuple = "(";
    for (std::size_t s = 0; s < r.tuples[k].size(); ++s) tuple += (s ? "," : "") + std::to_string(r.tuples[k][s]);
    o.rows.push_back({tuple + ")", num(r.joint[k]), num(r.product_of_marginals[k]),
                      num(std::abs(r.joint[k] - r.product_of_marginals[k]))});
  }
  o.rows.push_back({"max", "", "", num(r.max_residual)});
  o.result = r.to_json();
  return o;
}

Output cmd_compat(const RunConfig& cfg) {
  const auto model = require_model(cfg.model);
  if (!cfg.state.empty() && !named_ket(cfg.state) && cfg.state.find(',') == std::string::npos) {
    throw UsageError("bad --state");
  }
  Stream rng(cfg.seed, ~0ULL);
  const StateVector psi = parse_state(cfg.state.empty() ? "0" : cfg.state, 2, rng);
  const StateVector phi = parse_state(cfg.phi.empty() ? "+" : cfg.phi, 2, rng);
  const ParsedBasis basis = parse_basis(cfg.basis.empty() ? "zz" : cfg.basis, 4);
  if (basis.povm.dim() != 4) throw UsageError("compat needs a two-qubit basis");
  CompatibilityReport r;
  try {
    r = compatibility_audit(*model, psi, phi, basis.povm, basis.local);
  } catch (const UnsupportedError& e) {
    throw UsageError(e.what());
  } catch (const ContextError& e) {
    throw UsageError(std::string("compat: ") + e.what());
  }
  static constexpr std::array<const char*, 4> names{"i", "ii", "iii", "iv"};
  Output o;
  o.header = {"condition", "holds", "witnesses"};
  for (std::size_t c = 0; c < 4; ++c) {
    std::string w;
    for (const auto& s : r.witnesses[c]) w += (w.empty() ? "" : " ") + s;
    o.rows.push_back({names[c], r.holds[c] ? "yes" : "no", w});
  }
  if (r.locally_compatible) {
    std::string w;
    for (const auto& s : r.local_witnesses) w += (w.empty() ? "" : " ") + s;
    o.rows.push_back({"local", *r.locally_compatible ? "yes" : "no", w});
  }
  o.result = r.to_json();
  return o;
}

Output cmd_marginal(const RunConfig& cfg) {
  const auto model = require_model(cfg.model);
  if (!model->is_bipartite()) throw UsageError("marginal needs a two-party model (brans, hall)");
  const int particle = cfg.particle != 0 ? cfg.particle : 1;
  const BlochVector a = parse_vector(cfg.alice.empty() ? "0,0" : cfg.alice);
  const BlochVector b = parse_vector(cfg.bob.empty() ? "0,0" : cfg.bob);
  const BlochVector b_alt = parse_vector(cfg.bob_alt.empty() ? "90,0" : cfg.bob_alt);
  const TvReport r = setting_marginal_dependence(*model, particle, a, b, b_alt, cfg.resolution, cfg.seed);
  Output o;
  o.header = {"particle", "tv", "stderr", "exact", "points"};
  o.rows.push_back({std::to_string(particle), num(r.tv), num(r.stderr_), r.exact ? "yes" : "no", num(r.points)});
  o.result = r.to_json();
  o.result["particle"] = particle;
  return o;
}

Output cmd_channel(const RunConfig& cfg) {
  const BlochVector a = parse_vector(cfg.alice.empty() ? "0,0" : cfg.alice);
  const BlochVector b = parse_vector(cfg.bob.empty() ? "60,0" : cfg.bob);
  if (cfg.accepted == 0) throw UsageError("--accepted must be positive");
  std::ofstream trace_file;
  if (!cfg.trace.empty()) {
    trace_file.open(cfg.trace);
    if (!trace_file) throw UsageError("cannot open trace file '" + cfg.trace + "'");
  }
  const ChannelTranscript t = run_channel(a, b, cfg.accepted, cfg.seed, cfg.trace.empty() ? nullptr : &trace_file);
  const CommunicationCost cost = communication_cost(t);
  const double expected = (1.0 + a.dot(b)) / 2.0;
  Output o;
  o.result["transcript"] = t.to_json();
  o.result["acceptance_rate"] = t.acceptance_rate();
  o.result["plus_frequency"] = t.plus_frequency();
  o.result["expected_plus_frequency"] = expected;
  o.result["nominal_bits"] = cost.nominal_bits;
  o.result["empirical_bits"] = cost.empirical_bits;
  o.header = {"quantity", "value"};
  o.rows = {{"sent", num(t.sent)},
            {"accepted", num(t.accepted)},
            {"acceptance_rate", num(t.acceptance_rate())},
            {"plus_frequency", num(t.plus_frequency())},
            {"expected_plus_frequency", num(expected)},
            {"nominal_bits", num(cost.nominal_bits)},
            {"empirical_bits", num(cost.empirical_bits)}};
  const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(t.accepted));
  if (std::abs(t.plus_frequency() - expected) > std::max(tol::kStatSigmas * se, tol::kStructural)) {
    o.status = kExitStatisticalFail;
  }
  return o;
}

Output cmd_info(const RunConfig& cfg) {
  const InfoReport r = mutual_information_report(cfg.resolution);
  Output o;
  o.result = r.to_json();
  o.header = {"quantity", "nats"};
  o.rows = {{"h_a", num(r.h_a)},
            {"h_lambda", num(r.h_lambda)},
            {"h_joint", num(r.h_joint)},
            {"mutual_information", num(r.mutual_information)},
            {"mutual_information_bits", num(r.mutual_information_bits())}};
  return o;
}

/// Per-command defaults for options left unset on the command line.
void apply_defaults(RunConfig& cfg) {
  const std::string& c = cfg.command == "audit" ? cfg.check : cfg.command;
  const bool sampled = c == "verify" || c == "scan" || c == "epistemicity" || c == "randomness" || c == "reciprocity";
  if (sampled && cfg.shots == 0) cfg.shots = c == "verify" ? 100000 : 1000000;
  if ((c == "verify" || c == "epistemicity") && cfg.trials == 0) cfg.trials = c == "verify" ? 10 : 1;
  if (c == "channel" && cfg.accepted == 0) cfg.accepted = 100000;
  if (c == "info" && cfg.resolution == 0) cfg.resolution = 64;
  if (c == "marginal" && cfg.resolution == 0) cfg.resolution = 1000000;
}

Output dispatch(const RunConfig& cfg) {
  const std::string& c = cfg.command == "audit" ? cfg.check : cfg.command;
  if (c == "verify") return cmd_verify(cfg);
  if (c == "scan") return cmd_scan(cfg);
  if (c == "epistemicity") return cmd_epistemicity(cfg);
  if (c == "randomness") return cmd_randomness(cfg);
  if (c == "reciprocity") return cmd_reciprocity(cfg);
  if (c == "pi" || c == "pi-check") return cmd_pi(cfg);
  if (c == "compat") return cmd_compat(cfg);
  if (c == "marginal") return cmd_marginal(cfg);
  if (c == "channel") return cmd_channel(cfg);
  if (c == "info") return cmd_info(cfg);
  throw UsageError("unknown command '" + c + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measurement-dependent hidden-variable model simulator"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string seed_text;
  std::string model_flag;

  auto common = [&](CLI::App* sub, bool with_model) {
    if (with_model) {
      sub->add_option("MODEL", cfg.model, "Model name");
      sub->add_option("--model", model_flag, "Model name (alternative to MODEL)");
    }
    sub->add_option("--seed", seed_text, "RNG seed (default: from entropy)");
    sub->add_option("--output", cfg.output, "Write to this file instead of stdout");
    sub->add_option("--format", cfg.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--threads", cfg.threads, "Worker threads (default: all cores)");
  };
  auto states = [&](CLI::App* sub) {
    sub->add_option("--state", cfg.state, "State: 0, 1, +, -, +i, -i, \"theta,phi\" or \"x,y,z\"");
    sub->add_option("--phi", cfg.phi, "Second state, same syntax as --state");
    sub->add_option("--basis", cfg.basis, "Basis: z, x, y, zz, xy, ..., bell, mixed-psi-plus, pbr, computational");
    sub->add_option("--dim", cfg.dim, "Hilbert space dimension for random instances");
  };

  auto* verify = app.add_subcommand("verify", "Born-rule agreement over random contexts");
  common(verify, true);
  verify->add_option("--shots", cfg.shots, "Shots per context")->default_str("100000")->check(CLI::PositiveNumber);
  verify->add_option("--trials", cfg.trials, "Random contexts")->default_str("10")->check(CLI::PositiveNumber);
  verify->add_option("--dim", cfg.dim, "Dimension for gbrans and interval contexts");

  auto* scan = app.add_subcommand("scan", "Singlet correlation against angle");
  common(scan, true);
  scan->add_option("--angles", cfg.angles, "Comma-separated angles in degrees (default 0,15,...,180)");
  scan->add_option("--shots", cfg.shots, "Shots per angle")->default_str("1000000")->check(CLI::PositiveNumber);

  auto* epi = app.add_subcommand("epistemicity", "Degree of epistemicity");
  common(epi, true);
  states(epi);
  epi->add_option("--shots", cfg.shots, "Monte Carlo samples")->default_str("1000000")->check(CLI::PositiveNumber);
  epi->add_flag("--monte-carlo", cfg.monte_carlo, "Sample even when the ontic space is finite");
  epi->add_option("--trials", cfg.trials, "Random state pairs")->default_str("1")->check(CLI::PositiveNumber);

  auto* rnd = app.add_subcommand("randomness", "Outcome randomness not fixed by lambda");
  common(rnd, true);
  states(rnd);
  rnd->add_option("--outcome", cfg.outcome, "Outcome label (default: all)");
  rnd->add_option("--shots", cfg.shots, "Monte Carlo samples")->default_str("1000000")->check(CLI::PositiveNumber);

  auto* pi = app.add_subcommand("pi-check", "Preparation independence residual");
  common(pi, true);
  states(pi);

  auto* channel = app.add_subcommand("channel", "Two-party qubit channel simulation");
  common(channel, false);
  channel->add_option("--alice", cfg.alice, "Alice's axis, \"theta,phi\" degrees or \"x,y,z\"");
  channel->add_option("--bob", cfg.bob, "Bob's axis");
  channel->add_option("--accepted", cfg.accepted, "Accepted rounds to run")->default_str("100000")->check(CLI::PositiveNumber);
  channel->add_option("--trace", cfg.trace, "Write the per-round CSV trace here");

  auto* info = app.add_subcommand("info", "Entropies and mutual information of the channel protocol");
  common(info, false);
  info->add_option("--resolution", cfg.resolution, "Gauss-Legendre nodes per axis")->default_str("64")->check(CLI::PositiveNumber);

  auto* audit = app.add_subcommand("audit", "Analysis audits");
  common(audit, false);
  audit->add_option("CHECK", cfg.check, "epistemicity, randomness, reciprocity, pi, compat or marginal")
      ->required()
      ->check(CLI::IsMember({"epistemicity", "randomness", "reciprocity", "pi", "compat", "marginal"}));
  audit->add_option("MODEL", cfg.model, "Model name");
  audit->add_option("--model", model_flag, "Model name (alternative to MODEL)");
  states(audit);
  audit->add_flag("--monte-carlo", cfg.monte_carlo, "Epistemicity: sample even when the ontic space is finite");
  audit->add_option("--outcome", cfg.outcome, "Outcome label for randomness");
  audit->add_option("--shots", cfg.shots, "Monte Carlo samples")->default_str("1000000")->check(CLI::PositiveNumber);
  audit->add_option("--trials", cfg.trials, "Random instances")->default_str("1")->check(CLI::PositiveNumber);
  audit->add_option("--particle", cfg.particle, "Particle for marginal (1 or 2, default 1)");
  audit->add_option("--alice", cfg.alice, "Alice's setting for marginal");
  audit->add_option("--bob", cfg.bob, "Bob's setting for marginal");
  audit->add_option("--bob-alt", cfg.bob_alt, "Bob's alternative setting for marginal");
  audit->add_option("--resolution", cfg.resolution, "Sphere quadrature points")->default_str("1000000")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (!model_flag.empty()) {
    if (!cfg.model.empty() && cfg.model != model_flag) {
      err << "error: model given twice ('" << cfg.model << "' and '" << model_flag << "')\n";
      return kExitUsage;
    }
    cfg.model = model_flag;
  }
  try {
    if (seed_text.empty()) {
      cfg.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    } else {
      std::uint64_t s = 0;
      const auto res = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), s);
      if (res.ec != std::errc() || res.ptr != seed_text.data() + seed_text.size()) {
        throw UsageError("--seed must be a non-negative integer");
      }
      cfg.seed = s;
    }
    cfg.seed_given = true;
    cfg.threads = ExecutionOptions{cfg.threads}.resolved_threads();
    if (cfg.format.empty()) cfg.format = cfg.command == "scan" ? "csv" : (cfg.command == "channel" ? "json" : "table");
    if (cfg.dim < 2) throw UsageError("--dim must be at least 2");
    apply_defaults(cfg);

    const Output o = dispatch(cfg);
    if (cfg.output.empty()) {
      emit(cfg, o, out);
    } else {
      std::ofstream f(cfg.output);
      if (!f) throw UsageError("cannot open output file '" + cfg.output + "'");
      emit(cfg, o, f);
    }
    return o.status;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContextError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace mdhv::cli
