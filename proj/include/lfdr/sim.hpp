#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lfdr/cost_model.hpp"
#include "lfdr/oracles.hpp"
#include "lfdr/policies.hpp"

namespace lfdr {

// Drives one policy over one path. The engine owns the budget (exact lattice
// integers on discrete paths), enforces the feasibility guard on every accept,
// and records the budget trajectory.
RunResult run_policy(Policy& policy, const SamplePath& path,
                     std::uint64_t draw_stream_key = 0);

enum class Benchmark { kDlp, kHoFix, kHoAny, kDp };

std::string_view benchmark_name(Benchmark benchmark);
std::optional<Benchmark> benchmark_from_name(std::string_view name);

// Model used at every horizon, or the horizon-indexed family
//   values [-1, 1, 3], probs [1/2 + r, 1/2 - 2r, r] with r ~ 1/sqrt(T),
// whose prefix expectations telescope to exactly zero (horizon >= 16).
struct SqrtHorizonFamily {};
using ModelSource = std::variant<SqrtHorizonFamily, CostModel>;

CostModel model_for_horizon(const ModelSource& source, int horizon);

struct ExperimentConfig {
  ModelSource model;
  std::vector<int> horizons;
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<PolicySpec> policies;
  std::vector<Benchmark> benchmarks;
  bool diagnostics = false;
  int threads = 0;  // 0 = hardware concurrency
};

struct ResultRow {
  std::string policy;
  int horizon = 0;
  std::string benchmark;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double mean_reward = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
};

struct DiagnosticsRow {
  std::string policy;
  int horizon = 0;
  double mean_wrong_accepts = 0.0;
  double mean_wrong_rejects = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<DiagnosticsRow> diagnostics;
};

// Evaluates every policy on common paths (stream keys derive from
// (seed, replication)), computes per-path benchmarks, and aggregates in
// replication order so results are bit-identical for any worker count.
// Hard-fails (throws) if any run breaks feasibility or the pathwise sandwich
// reward <= ho_any <= ho_fix.
ExperimentResult run_experiment(const ExperimentConfig& config);

enum class MixOracle { kGreedySwap, kBruteForce };

// Per-step hindsight coupling: H_t is the oracle value of the suffix from t
// seeded with the policy's realized budget B^(t); the value of following the
// policy through t and playing hindsight after is (accepts through t) + H_{t+1}.
// step_loss[t-1] = H_t - X_t - H_{t+1} >= 0, a wrong accept/reject is a
// positive loss on an accepted/rejected step, and the losses telescope to
// ho_any(path) - reward.
struct WrongDecisionReport {
  int wrong_accepts = 0;
  int wrong_rejects = 0;
  std::vector<std::uint8_t> wrong_accept_at;
  std::vector<std::uint8_t> wrong_reject_at;
  std::vector<int> step_loss;
  int oracle_full_value = 0;  // H_1 = oracle value of the whole path
};

WrongDecisionReport classify_wrong_decisions(const SamplePath& path, const DecisionTrace& trace,
                                             MixOracle oracle = MixOracle::kGreedySwap);

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

// OLS slope of log(y) on log(x); points with y <= 0 or x <= 0 are skipped and
// counted out of `points`. Needs at least two usable points.
SlopeFit loglog_slope(std::span<const std::pair<double, double>> series);

}  // namespace lfdr
