#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lfdr/cost_model.hpp"

namespace lfdr {

struct OracleResult {
  int count = 0;
  DecisionTrace trace;  // one attaining selection
};

// Hindsight benchmark with only the final-period constraint: maximize the
// number of selected entries subject to (sum of selected costs) <= budget.
// Exact greedy: take every non-positive cost, then positives in ascending
// order while the total fits.
OracleResult ho_fix(const SamplePath& path, double initial_budget = 0.0);

// Hindsight benchmark with every prefix constraint: each prefix of selected
// costs must stay <= budget. Greedy with swap: select everything, and on a
// prefix violation evict the largest positive selected so far (ties broken
// toward the latest occurrence).
OracleResult ho_any(const SamplePath& path, double initial_budget = 0.0);

// Exhaustive reference for ho_any; horizon capped at 20 (2^T subsets).
OracleResult ho_any_brute_force(const SamplePath& path, double initial_budget = 0.0);

// Span forms used on path suffixes; lattice spans take exact integer budgets.
OracleResult ho_fix_span(std::span<const std::int64_t> costs, std::int64_t budget);
OracleResult ho_fix_span(std::span<const double> costs, double budget);
OracleResult ho_any_span(std::span<const std::int64_t> costs, std::int64_t budget);
OracleResult ho_any_span(std::span<const double> costs, double budget);
OracleResult ho_any_brute_force_span(std::span<const std::int64_t> costs, std::int64_t budget);

struct DpOptions {
  // Default boundary: the value function vanishes after the final period, so
  // all T arrivals are decided. The legacy flag zeroes the value at the final
  // period instead (T - 1 effective decisions).
  bool legacy_boundary = false;
};

// Backward-induction value of the budget-replenishment acceptance problem on
// the integer lattice. Discrete models only. Budget states at period t range
// over [0, (t-1) * max(0, -min scaled value) + max positive scaled value]; the
// headroom above the reachable range lets dp_decide answer hypothetical
// what-if budgets.
class DpTable {
 public:
  double value() const { return rows_.front().front(); }  // h(1, 0)
  // h(t, B) with B in lattice units; t in [1, T+1].
  double at(int t, std::int64_t budget) const;
  int horizon() const { return horizon_; }
  std::int64_t lattice_step() const { return step_; }

 private:
  friend DpTable dp_table(const CostModel&, int, DpOptions);
  friend bool dp_decide(const DpTable&, const CostModel&, int, std::int64_t, int);
  std::vector<std::vector<double>> rows_;  // rows_[t-1] = h(t, .)
  int horizon_ = 0;
  std::int64_t step_ = 0;  // budget growth per period
};

// Expected optimal value h(1, 0); rolling two-row evaluation.
double dp_value(const CostModel& model, int horizon, DpOptions options = {});

// Full table, needed to run the DP as an online policy.
DpTable dp_table(const CostModel& model, int horizon, DpOptions options = {});

// Accept decision at period t with lattice budget and arrival type; ties
// toward accept. Throws on out-of-range states.
bool dp_decide(const DpTable& table, const CostModel& model, int t, std::int64_t budget, int type);

// Walk statistics for +-1 cost paths under the greedy wall-at-zero rule:
// final_distance is the terminal budget, blocked_steps counts +1 arrivals
// rejected at budget zero.
struct ReflectedWalkStats {
  std::int64_t final_distance = 0;
  std::int64_t blocked_steps = 0;
};

ReflectedWalkStats reflected_walk_stats(const SamplePath& path);
ReflectedWalkStats reflected_walk_stats(std::span<const int> steps);

}  // namespace lfdr
