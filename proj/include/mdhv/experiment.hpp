#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mdhv/model.hpp"
#include "mdhv/rng.hpp"

namespace mdhv {

struct ExecutionOptions {
  std::size_t threads = 0;  ///< 0: hardware concurrency
  std::uint64_t block_size = 65536;

  [[nodiscard]] std::size_t resolved_threads() const noexcept {
    if (threads != 0) return threads;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
};

/**
 * Runs `body(count, stream)` over consecutive blocks of `total` shots. Block b
 * always uses Stream(seed, b), and results come back in block order, so the
 * outcome does not depend on the thread count.
 */
template <class Partial>
std::vector<Partial> run_blocks(std::uint64_t total, std::uint64_t seed, const ExecutionOptions& opts,
                                const std::function<Partial(std::uint64_t, Stream&)>& body) {
  const std::uint64_t block = std::max<std::uint64_t>(1, opts.block_size);
  const std::uint64_t blocks = (total + block - 1) / block;
  std::vector<Partial> out(blocks);
  auto work = [&](std::uint64_t b) {
    Stream rng(seed, b);
    const std::uint64_t count = std::min(block, total - b * block);
    out[b] = body(count, rng);
  };

  const std::size_t workers = std::min<std::uint64_t>(opts.resolved_threads(), blocks);
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) work(b);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t b = w; b < blocks; b += workers) work(b);
    });
  }
  pool.clear();
  return out;
}

struct SimulationReport {
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> labels;
  std::vector<std::uint64_t> counts;
  std::vector<double> estimates;
  std::vector<double> stderr_;  ///< binomial, from the Born reference: sqrt(p(1-p)/shots)
  std::vector<double> born_reference;

  [[nodiscard]] double estimate(std::string_view label) const;

  /// Largest |estimate - born| / stderr over outcomes; 0 where both are exact.
  [[nodiscard]] double max_z_score() const;

  /// Fields in fixed order: shots, seed, counts, estimates, stderr, born_reference.
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Samples lambda from the model's density and an outcome from its response, `shots` times.
[[nodiscard]] SimulationReport run_experiment(const HiddenVariableModel& model, const ModelContext& ctx,
                                              std::uint64_t shots, std::uint64_t seed,
                                              const ExecutionOptions& opts = {});

/// <A B> = sum_ij i j p(ij) of a two-party report with its standard error sqrt((1 - E^2)/shots).
struct Correlation {
  double value;
  double stderr_;
};

[[nodiscard]] Correlation pair_correlation(const SimulationReport& report);

}  // namespace mdhv
