#pragma once

// Seeded Monte-Carlo trials and grid sweeps.
//
// Trial t of every grid point uses the scenario seed derive_seed(base_seed, {t}). Since
// scenario sampling draws each relay and each eavesdropper from its own stream, the
// (N, J) grid points of one trial are nested: the N = 10 network is a sub-network of the
// N = 50 one and the first J eavesdroppers are shared across J. Direct-transmission
// metrics therefore do not depend on N.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "coopsec/capacity.hpp"
#include "coopsec/channel.hpp"
#include "coopsec/design.hpp"
#include "coopsec/error.hpp"
#include "coopsec/rng.hpp"

namespace coopsec {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Strategy { CoopMinPower, CoopMaxSecrecy, DirectMinPower, DirectMaxSecrecy };

[[nodiscard]] constexpr std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::CoopMinPower: return "coop_min_power";
    case Strategy::CoopMaxSecrecy: return "coop_max_secrecy";
    case Strategy::DirectMinPower: return "direct_min_power";
    case Strategy::DirectMaxSecrecy: return "direct_max_secrecy";
  }
  return "unknown";
}

[[nodiscard]] inline std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::CoopMinPower, Strategy::CoopMaxSecrecy, Strategy::DirectMinPower,
                     Strategy::DirectMaxSecrecy})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

[[nodiscard]] constexpr bool is_min_power(Strategy s) noexcept {
  return s == Strategy::CoopMinPower || s == Strategy::DirectMinPower;
}

[[nodiscard]] constexpr bool is_cooperative(Strategy s) noexcept {
  return s == Strategy::CoopMinPower || s == Strategy::CoopMaxSecrecy;
}

enum class CsiMode { Perfect, Imperfect };

[[nodiscard]] constexpr std::string_view to_string(CsiMode m) noexcept {
  return m == CsiMode::Perfect ? "perfect" : "imperfect";
}

struct SweepConfig {
  GeometryConfig geometry;
  std::vector<std::size_t> grid_n{10};
  std::vector<std::size_t> grid_j{1};
  std::vector<Strategy> strategies{Strategy::CoopMaxSecrecy, Strategy::DirectMaxSecrecy};
  double target_secrecy = 3.0;               // bits/s/Hz, min-power strategies
  double power_budget = dbm_to_watts(5.0);   // W, max-secrecy strategies
  std::size_t trials = 1000;
  std::uint64_t base_seed = 1;
  /// Imperfect mode treats the sampled eavesdropper channels as estimates with error
  /// covariance csi_error_variance * I.
  CsiMode csi_mode = CsiMode::Perfect;
  double csi_error_variance = 0.0;
  Stage1Accounting stage1;
  design::IterationOptions iteration;
  std::size_t threads = 1;  // 0 = hardware concurrency

  void validate() const {
    auto fail = [](const std::string& msg) { throw Error(Errc::InvalidConfig, msg); };
    geometry.validate();
    if (trials < 1) fail("trials must be >= 1");
    if (grid_n.empty() || grid_j.empty()) fail("grid must be non-empty");
    if (strategies.empty()) fail("at least one strategy is required");
    if (std::ranges::any_of(grid_n, [](std::size_t n) { return n < 1; })) fail("grid N values must be >= 1");
    if (!(target_secrecy > 0.0)) fail("target_secrecy must be > 0");
    if (!(power_budget > 0.0)) fail("power_budget must be > 0");
    if (!(csi_error_variance >= 0.0)) fail("csi_error_variance must be >= 0");
    if (stage1.enabled && !(stage1.stage1_power >= 0.0)) fail("stage1 power must be >= 0");
    if (!(iteration.threshold > 0.0) || iteration.max_iter < 1) fail("invalid iteration options");
  }

  /// Design problem for a strategy (cooperative or not) on an N-node network.
  [[nodiscard]] design::DesignProblem problem_for(Strategy s, std::size_t n_nodes) const {
    design::DesignProblem p;
    p.objective = is_min_power(s) ? design::Objective::MinPowerFixedSecrecy : design::Objective::MaxSecrecyFixedPower;
    p.budget = is_min_power(s) ? target_secrecy : power_budget;
    if (csi_mode == CsiMode::Imperfect) {
      const auto n = static_cast<Eigen::Index>(n_nodes);
      p.r_delta = csi_error_variance * ComplexMatrix::Identity(n, n);
    }
    p.stage1 = stage1;
    p.iteration = iteration;
    return p;
  }
};

[[nodiscard]] inline std::string metric_name(Strategy s, CsiMode mode) {
  if (is_min_power(s)) return "transmit_power_w";
  if (is_cooperative(s) && mode == CsiMode::Imperfect) return "secrecy_lower_bound_bps_hz";
  return "secrecy_capacity_bps_hz";
}

struct TrialOutcome {
  double metric = std::numeric_limits<double>::quiet_NaN();  // W or bits/s/Hz
  std::optional<BeamformerSolution> solution;                  // cooperative strategies only
  std::optional<design::IterationTrace> trace;
  bool feasible = false;
  std::string reason;  // error text for infeasible trials
};

/// Runs one strategy on one scenario. Solver errors become infeasible outcomes.
[[nodiscard]] inline TrialOutcome run_trial(const Scenario& scenario, const design::DesignProblem& problem,
                                            Strategy strategy) {
  TrialOutcome out;
  try {
    if (is_cooperative(strategy)) {
      const bool wants_min = problem.objective == design::Objective::MinPowerFixedSecrecy;
      if (wants_min != is_min_power(strategy))
        throw Error(Errc::InvalidConfig, "problem objective does not match strategy");
      auto result = design::solve(problem, scenario.h, scenario.G, scenario.noise_power);
      out.metric = wants_min ? result.solution.transmit_power : result.solution.secrecy_capacity;
      out.solution = std::move(result.solution);
      out.trace = std::move(result.trace);
    } else {
      const std::vector<Complex> g0 = scenario.g0();
      out.metric = strategy == Strategy::DirectMinPower
                       ? direct_min_power(problem.budget, scenario.h0(), g0, scenario.noise_power)
                       : direct_secrecy(problem.budget, scenario.h0(), g0, scenario.noise_power);
    }
    out.feasible = true;
  } catch (const Error& e) {
    out.metric = std::numeric_limits<double>::quiet_NaN();
    out.feasible = false;
    out.reason = e.what();
  }
  return out;
}

struct SweepRow {
  std::size_t n_nodes = 0;
  std::size_t n_eavesdroppers = 0;
  Strategy strategy = Strategy::CoopMaxSecrecy;
  std::string metric_name;
  double mean = 0.0;        // over feasible trials; NaN when none
  double std_error = 0.0;   // sample standard deviation / sqrt(count)
  std::size_t infeasible = 0;
  std::size_t trials = 0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepMetadata {
  std::uint64_t base_seed = 0;
  std::string prng_id;
  std::string version;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  SweepMetadata metadata;
  /// Every metric, indexed [row][trial]; NaN marks infeasible trials.
  std::vector<std::vector<double>> samples;
};

/// Pairwise (cascade) summation; deterministic for a given order and more accurate
/// than a running sum.
[[nodiscard]] inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

struct Summary {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::size_t count = 0;
};

/// Mean and standard error of the finite entries of `xs`.
[[nodiscard]] inline Summary summarize(std::span<const double> xs) {
  std::vector<double> kept;
  kept.reserve(xs.size());
  for (double x : xs)
    if (std::isfinite(x)) kept.push_back(x);
  Summary s;
  s.count = kept.size();
  if (kept.empty()) return s;
  s.mean = pairwise_sum(kept) / static_cast<double>(kept.size());
  if (kept.size() < 2) {
    s.std_error = 0.0;
    return s;
  }
  std::vector<double> sq(kept.size());
  std::ranges::transform(kept, sq.begin(), [m = s.mean](double x) { return (x - m) * (x - m); });
  const double var = pairwise_sum(sq) / static_cast<double>(kept.size() - 1);
  s.std_error = std::sqrt(var / static_cast<double>(kept.size()));
  return s;
}

[[nodiscard]] inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return rng::derive_seed(base_seed, {static_cast<std::uint64_t>(trial)});
}

[[nodiscard]] inline SweepResult run_sweep(const SweepConfig& config) {
  config.validate();

  struct Point {
    std::size_t n, j;
  };
  std::vector<Point> points;
  for (std::size_t j : config.grid_j)
    for (std::size_t n : config.grid_n) points.push_back({n, j});

  const std::size_t n_strat = config.strategies.size();
  const std::size_t trials = config.trials;
  // samples[(point * n_strat + strategy) * trials + trial]
  std::vector<double> samples(points.size() * n_strat * trials, std::numeric_limits<double>::quiet_NaN());

  auto work = [&](std::size_t item) {
    const std::size_t p = item / trials;
    const std::size_t t = item % trials;
    GeometryConfig geom = config.geometry;
    geom.n_nodes = points[p].n;
    geom.n_eavesdroppers = points[p].j;
    const Scenario scenario = sample_scenario(geom, trial_seed(config.base_seed, t));
    for (std::size_t s = 0; s < n_strat; ++s) {
      const Strategy strat = config.strategies[s];
      const TrialOutcome o = run_trial(scenario, config.problem_for(strat, points[p].n), strat);
      samples[(p * n_strat + s) * trials + t] = o.feasible ? o.metric : std::numeric_limits<double>::quiet_NaN();
    }
  };

  const std::size_t total = points.size() * trials;
  std::size_t workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = std::min(workers, total);
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) work(i);
      });
  }

  SweepResult result;
  result.metadata = {config.base_seed, std::string(rng::kPrngId), std::string(kVersion)};
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < n_strat; ++s) {
      const std::span<const double> xs(samples.data() + (p * n_strat + s) * trials, trials);
      const Summary sum = summarize(xs);
      SweepRow row;
      row.n_nodes = points[p].n;
      row.n_eavesdroppers = points[p].j;
      row.strategy = config.strategies[s];
      row.metric_name = metric_name(row.strategy, config.csi_mode);
      row.mean = sum.mean;
      row.std_error = sum.std_error;
      row.infeasible = trials - sum.count;
      row.trials = trials;
      result.rows.push_back(std::move(row));
      result.samples.emplace_back(xs.begin(), xs.end());
    }
  }
  return result;
}

}  // namespace coopsec
