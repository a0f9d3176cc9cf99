#include "lfdr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace lfdr {

namespace {

constexpr int kBruteForceMaxHorizon = 20;

// For continuous costs, prefix comparisons allow the feasibility tolerance.
constexpr double kContinuousSlack = 1e-9;

template <typename Num>
Num slack() {
  return 0;
}
template <>
double slack<double>() {
  return kContinuousSlack;
}

template <typename Num>
void check_budget(Num budget) {
  if (budget < -slack<Num>()) throw std::invalid_argument("oracle: negative initial budget");
}

template <typename Num>
OracleResult ho_fix_impl(std::span<const Num> costs, Num budget) {
  check_budget(budget);
  OracleResult result;
  result.trace.assign(costs.size(), 0);
  Num total = 0;
  std::vector<std::size_t> positives;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (costs[i] <= 0) {
      result.trace[i] = 1;
      ++result.count;
      total += costs[i];
    } else {
      positives.push_back(i);
    }
  }
  std::sort(positives.begin(), positives.end(), [&](std::size_t a, std::size_t b) {
    if (costs[a] != costs[b]) return costs[a] < costs[b];
    return a < b;
  });
  for (const std::size_t i : positives) {
    if (total + costs[i] <= budget + slack<Num>()) {
      total += costs[i];
      result.trace[i] = 1;
      ++result.count;
    } else {
      break;
    }
  }
  return result;
}

// Greedy with swap. Selecting everything and evicting the largest positive on
// a violation keeps every prefix feasible: the violated prefix drops by the
// maximum selected positive, which is at least the entry that broke it, and
// earlier prefixes only decrease.
template <typename Num>
OracleResult ho_any_impl(std::span<const Num> costs, Num budget) {
  check_budget(budget);
  OracleResult result;
  result.trace.assign(costs.size(), 0);
  Num prefix = 0;
  // Max-heap of selected positive costs; ties pop the latest occurrence.
  std::priority_queue<std::pair<Num, std::size_t>> selected_positives;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    prefix += costs[i];
    result.trace[i] = 1;
    ++result.count;
    if (costs[i] > 0) selected_positives.emplace(costs[i], i);
    if (prefix > budget + slack<Num>()) {
      const auto [cost, index] = selected_positives.top();
      selected_positives.pop();
      prefix -= cost;
      result.trace[index] = 0;
      --result.count;
    }
  }
  return result;
}

template <typename Num>
OracleResult ho_any_brute_impl(std::span<const Num> costs, Num budget) {
  check_budget(budget);
  const int horizon = static_cast<int>(costs.size());
  if (horizon > kBruteForceMaxHorizon)
    throw std::invalid_argument("ho_any_brute_force: horizon exceeds 20");
  OracleResult best;
  best.trace.assign(costs.size(), 0);
  const std::uint32_t limit = 1u << horizon;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    int count = 0;
    Num prefix = 0;
    bool feasible = true;
    for (int t = 0; t < horizon; ++t) {
      if (mask & (1u << t)) {
        prefix += costs[t];
        ++count;
        if (prefix > budget + slack<Num>()) {
          feasible = false;
          break;
        }
      }
    }
    if (feasible && count > best.count) {
      best.count = count;
      for (int t = 0; t < horizon; ++t) best.trace[t] = (mask & (1u << t)) ? 1 : 0;
    }
  }
  return best;
}

std::int64_t lattice_budget(const SamplePath& path, double budget) {
  const double scaled = budget * static_cast<double>(path.scale);
  const double rounded = std::nearbyint(scaled);
  if (std::fabs(scaled - rounded) > 1e-6)
    throw std::invalid_argument("oracle budget is off the path lattice");
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

OracleResult ho_fix_span(std::span<const std::int64_t> costs, std::int64_t budget) {
  return ho_fix_impl(costs, budget);
}
OracleResult ho_fix_span(std::span<const double> costs, double budget) {
  return ho_fix_impl(costs, budget);
}
OracleResult ho_any_span(std::span<const std::int64_t> costs, std::int64_t budget) {
  return ho_any_impl(costs, budget);
}
OracleResult ho_any_span(std::span<const double> costs, double budget) {
  return ho_any_impl(costs, budget);
}
OracleResult ho_any_brute_force_span(std::span<const std::int64_t> costs, std::int64_t budget) {
  return ho_any_brute_impl(costs, budget);
}

OracleResult ho_fix(const SamplePath& path, double initial_budget) {
  if (path.is_discrete())
    return ho_fix_impl<std::int64_t>(path.lattice, lattice_budget(path, initial_budget));
  return ho_fix_impl<double>(path.costs, initial_budget);
}

OracleResult ho_any(const SamplePath& path, double initial_budget) {
  if (path.is_discrete())
    return ho_any_impl<std::int64_t>(path.lattice, lattice_budget(path, initial_budget));
  return ho_any_impl<double>(path.costs, initial_budget);
}

OracleResult ho_any_brute_force(const SamplePath& path, double initial_budget) {
  if (path.is_discrete())
    return ho_any_brute_impl<std::int64_t>(path.lattice, lattice_budget(path, initial_budget));
  return ho_any_brute_impl<double>(path.costs, initial_budget);
}

namespace {

struct DpShape {
  std::int64_t step = 0;      // max budget growth per period
  std::int64_t headroom = 0;  // max positive cost: extra states so dp_decide
                              // can evaluate hypothetical (unreached) budgets
  int effective_horizon = 0;
};

DpShape dp_shape(const CostModel& model, int horizon, DpOptions options) {
  if (model.kind() != ModelKind::kDiscrete)
    throw std::invalid_argument("dp: discrete models only");
  if (horizon < 1) throw std::invalid_argument("dp: horizon must be >= 1");
  std::int64_t step = 0;
  std::int64_t headroom = 0;
  for (const std::int64_t v : model.scaled_values()) {
    step = std::max(step, -v);
    headroom = std::max(headroom, v);
  }
  return DpShape{step, headroom, options.legacy_boundary ? horizon - 1 : horizon};
}

// One backward step: fills h(t, .) over budgets [0, (t-1)*step + headroom]
// from h(t+1, .).
void dp_backward_row(const CostModel& model, const std::vector<double>& next, int t,
                     std::int64_t step, std::int64_t headroom, std::vector<double>& row) {
  const std::int64_t budgets = (static_cast<std::int64_t>(t) - 1) * step + headroom;
  row.assign(static_cast<std::size_t>(budgets) + 1, 0.0);
  const auto& probs = model.probs_real();
  const auto& values = model.scaled_values();
  for (std::int64_t budget = 0; budget <= budgets; ++budget) {
    double expected = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double keep = next[static_cast<std::size_t>(budget)];
      double best = keep;
      if (values[i] <= budget) {
        const double take = 1.0 + next[static_cast<std::size_t>(budget - values[i])];
        if (take > best) best = take;
      }
      expected += probs[i] * best;
    }
    row[static_cast<std::size_t>(budget)] = expected;
  }
}

}  // namespace

double dp_value(const CostModel& model, int horizon, DpOptions options) {
  const DpShape shape = dp_shape(model, horizon, options);
  if (shape.effective_horizon < 1) return 0.0;
  std::vector<double> next(
      static_cast<std::size_t>(shape.effective_horizon * shape.step + shape.headroom) + 1, 0.0);
  std::vector<double> row;
  for (int t = shape.effective_horizon; t >= 1; --t) {
    dp_backward_row(model, next, t, shape.step, shape.headroom, row);
    std::swap(next, row);
  }
  return next.front();
}

DpTable dp_table(const CostModel& model, int horizon, DpOptions options) {
  const DpShape shape = dp_shape(model, horizon, options);
  DpTable table;
  table.horizon_ = horizon;
  table.step_ = shape.step;
  table.rows_.assign(static_cast<std::size_t>(horizon) + 1, {});
  table.rows_[static_cast<std::size_t>(horizon)].assign(
      static_cast<std::size_t>(horizon * shape.step + shape.headroom) + 1, 0.0);  // h(T+1, .)
  if (options.legacy_boundary && horizon >= 1)
    table.rows_[static_cast<std::size_t>(horizon - 1)].assign(
        static_cast<std::size_t>((horizon - 1) * shape.step + shape.headroom) + 1, 0.0);
  const int last_computed = options.legacy_boundary ? horizon - 1 : horizon;
  for (int t = last_computed; t >= 1; --t)
    dp_backward_row(model, table.rows_[static_cast<std::size_t>(t)], t, shape.step, shape.headroom,
                    table.rows_[static_cast<std::size_t>(t - 1)]);
  return table;
}

double DpTable::at(int t, std::int64_t budget) const {
  if (t < 1 || t > horizon_ + 1) throw std::out_of_range("DpTable::at: period out of range");
  const auto& row = rows_[static_cast<std::size_t>(t - 1)];
  if (budget < 0 || budget >= static_cast<std::int64_t>(row.size()))
    throw std::out_of_range("DpTable::at: budget out of range");
  return row[static_cast<std::size_t>(budget)];
}

bool dp_decide(const DpTable& table, const CostModel& model, int t, std::int64_t budget, int type) {
  if (t < 1 || t > table.horizon_) throw std::out_of_range("dp_decide: period out of range");
  if (type < 0 || type >= model.num_types()) throw std::out_of_range("dp_decide: bad type");
  const std::int64_t cost = model.scaled_values()[static_cast<std::size_t>(type)];
  if (cost > budget) return false;
  const double keep = table.at(t + 1, budget);
  const double take = 1.0 + table.at(t + 1, budget - cost);
  return take >= keep;
}

ReflectedWalkStats reflected_walk_stats(const SamplePath& path) {
  if (!path.is_discrete()) throw std::invalid_argument("reflected_walk_stats: lattice paths only");
  std::vector<int> steps;
  steps.reserve(path.lattice.size());
  for (const std::int64_t v : path.lattice) {
    if (v != path.scale && v != -path.scale)
      throw std::invalid_argument("reflected_walk_stats: costs must be +-1 on the lattice");
    steps.push_back(v > 0 ? 1 : -1);
  }
  return reflected_walk_stats(std::span<const int>(steps));
}

ReflectedWalkStats reflected_walk_stats(std::span<const int> steps) {
  ReflectedWalkStats stats;
  std::int64_t distance = 0;
  for (const int s : steps) {
    if (s == 1) {
      if (distance == 0)
        ++stats.blocked_steps;
      else
        --distance;
    } else if (s == -1) {
      ++distance;
    } else {
      throw std::invalid_argument("reflected_walk_stats: steps must be +-1");
    }
  }
  stats.final_distance = distance;
  return stats;
}

}  // namespace lfdr
