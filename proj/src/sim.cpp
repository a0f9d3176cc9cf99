#include "lfdr/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lfdr/fluid.hpp"
#include "lfdr/rng.hpp"

namespace lfdr {

RunResult run_policy(Policy& policy, const SamplePath& path, std::uint64_t draw_stream_key) {
  const int horizon = path.horizon();
  RunResult result;
  result.trace.assign(static_cast<std::size_t>(horizon), 0);
  result.budget.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
  policy.begin_run(rng::Stream{draw_stream_key});

  if (path.is_discrete()) {
    const double scale = static_cast<double>(path.scale);
    std::int64_t budget = 0;
    for (int t = 1; t <= horizon; ++t) {
      const std::size_t idx = static_cast<std::size_t>(t - 1);
      const std::int64_t cost = path.lattice[idx];
      Step step;
      step.t = t;
      step.horizon = horizon;
      step.budget = static_cast<double>(budget) / scale;
      step.budget_lattice = budget;
      step.cost = path.costs[idx];
      step.type = path.types[idx];
      step.feasible = cost <= budget;
      const bool accept = policy.decide(step) && step.feasible;
      if (accept) {
        budget -= cost;
        result.trace[idx] = 1;
        ++result.reward;
      }
      result.budget[idx + 1] = static_cast<double>(budget) / scale;
    }
  } else {
    double budget = 0.0;
    for (int t = 1; t <= horizon; ++t) {
      const std::size_t idx = static_cast<std::size_t>(t - 1);
      const double cost = path.costs[idx];
      Step step;
      step.t = t;
      step.horizon = horizon;
      step.budget = budget;
      step.cost = cost;
      step.type = -1;
      step.feasible = cost <= budget;
      const bool accept = policy.decide(step) && step.feasible;
      if (accept) {
        budget -= cost;
        result.trace[idx] = 1;
        ++result.reward;
      }
      result.budget[idx + 1] = budget;
    }
  }
  return result;
}

std::string_view benchmark_name(Benchmark benchmark) {
  switch (benchmark) {
    case Benchmark::kDlp:
      return "dlp";
    case Benchmark::kHoFix:
      return "ho_fix";
    case Benchmark::kHoAny:
      return "ho_any";
    case Benchmark::kDp:
      return "dp";
  }
  return "unknown";
}

std::optional<Benchmark> benchmark_from_name(std::string_view name) {
  if (name == "dlp") return Benchmark::kDlp;
  if (name == "ho_fix") return Benchmark::kHoFix;
  if (name == "ho_any") return Benchmark::kHoAny;
  if (name == "dp") return Benchmark::kDp;
  return std::nullopt;
}

CostModel model_for_horizon(const ModelSource& source, int horizon) {
  if (const CostModel* fixed = std::get_if<CostModel>(&source)) return *fixed;
  if (horizon < 16)
    throw std::invalid_argument("sqrt-horizon family needs horizon >= 16");
  // r approximates 1/sqrt(T) by a rational used consistently in all three
  // probabilities, keeping the vector an exact distribution with an exactly
  // telescoping prefix expectation.
  const std::int64_t den = 1000000000;
  const std::int64_t num = std::llround(static_cast<double>(den) / std::sqrt(static_cast<double>(horizon)));
  const Rational r(num, den);
  const Rational half(1, 2);
  return CostModel::discrete({Rational(-1), Rational(1), Rational(3)},
                             {half + r, half - Rational(2) * r, r});
}

namespace {

struct RepRecord {
  std::vector<int> rewards;            // per policy spec
  std::vector<int> wrong_accepts;      // diagnostics, per policy spec
  std::vector<int> wrong_rejects;
  int ho_fix_value = 0;
  int ho_any_value = 0;
  double ho_fix_real = 0.0;
  double ho_any_real = 0.0;
};

double benchmark_value(Benchmark benchmark, const RepRecord& record, bool discrete,
                       double dlp_value, double dp_val) {
  switch (benchmark) {
    case Benchmark::kDlp:
      return dlp_value;
    case Benchmark::kHoFix:
      return discrete ? static_cast<double>(record.ho_fix_value) : record.ho_fix_real;
    case Benchmark::kHoAny:
      return discrete ? static_cast<double>(record.ho_any_value) : record.ho_any_real;
    case Benchmark::kDp:
      return dp_val;
  }
  return 0.0;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.replications < 1) throw std::invalid_argument("run_experiment: replications < 1");
  if (config.horizons.empty()) throw std::invalid_argument("run_experiment: no horizons");
  if (config.policies.empty()) throw std::invalid_argument("run_experiment: no policies");
  if (config.benchmarks.empty()) throw std::invalid_argument("run_experiment: no benchmarks");

  ExperimentResult result;
  const int replications = config.replications;

  for (const int horizon : config.horizons) {
    if (horizon < 1) throw std::invalid_argument("run_experiment: horizon must be >= 1");
    const CostModel model = model_for_horizon(config.model, horizon);
    const bool discrete = model.is_discrete();

    const bool wants_dp_benchmark =
        std::any_of(config.benchmarks.begin(), config.benchmarks.end(),
                    [](Benchmark b) { return b == Benchmark::kDp; });
    const bool wants_dp_exact =
        std::any_of(config.policies.begin(), config.policies.end(),
                    [](const PolicySpec& s) { return s.kind == PolicyKind::kDpExact; });
    if ((wants_dp_benchmark || wants_dp_exact) && !discrete)
      throw std::runtime_error("run_experiment: dp requires a discrete model");

    const double dlp_value =
        static_cast<double>(horizon) * solve_fluid(model, Rational(0)).value_rate;
    const double dp_val = wants_dp_benchmark ? dp_value(model, horizon) : 0.0;
    // The dp_exact pseudo-policy reports the planner value under the
    // pre-terminal convention (value function pinned to zero at the final
    // period, so the last arrival is not decided); the runnable dp policy and
    // the dp benchmark decide all T arrivals instead.
    DpOptions pre_terminal;
    pre_terminal.legacy_boundary = true;
    const double dp_exact_val = wants_dp_exact ? dp_value(model, horizon, pre_terminal) : 0.0;

    // Prototypes cloned per replication; dp tables are shared by the clones.
    std::vector<std::unique_ptr<Policy>> prototypes;
    for (const PolicySpec& spec : config.policies) {
      if (spec.kind == PolicyKind::kDpExact) {
        prototypes.push_back(nullptr);
        continue;
      }
      prototypes.push_back(make_policy(spec, model, horizon));
    }

    std::vector<RepRecord> records(static_cast<std::size_t>(replications));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<int> next_rep{0};

    auto worker = [&]() {
      std::vector<std::unique_ptr<Policy>> policies;
      policies.reserve(prototypes.size());
      for (const auto& proto : prototypes)
        policies.push_back(proto ? proto->clone() : nullptr);
      while (true) {
        const int rep = next_rep.fetch_add(1);
        if (rep >= replications) return;
        try {
          RepRecord& record = records[static_cast<std::size_t>(rep)];
          const SamplePath path =
              sample_path(model, horizon, rng::path_stream(config.seed, static_cast<std::uint64_t>(rep)));
          const std::uint64_t draw_key =
              rng::stream_key(config.seed, static_cast<std::uint64_t>(rep), rng::kPolicySalt);

          const OracleResult fix = ho_fix(path);
          const OracleResult any = ho_any(path);
          record.ho_fix_value = fix.count;
          record.ho_any_value = any.count;
          record.ho_fix_real = fix.count;
          record.ho_any_real = any.count;

          record.rewards.assign(policies.size(), 0);
          record.wrong_accepts.assign(policies.size(), 0);
          record.wrong_rejects.assign(policies.size(), 0);
          for (std::size_t p = 0; p < policies.size(); ++p) {
            if (!policies[p]) {  // dp_exact: deterministic value, no run
              continue;
            }
            const RunResult run = run_policy(*policies[p], path, draw_key);
            const FeasibilityVerdict verdict = validate_feasibility(path, run.trace);
            if (!verdict.ok) {
              std::ostringstream message;
              message << "feasibility violated by policy " << policies[p]->name() << " at t="
                      << (*verdict.first_violation + 1) << " (horizon " << horizon << ", rep "
                      << rep << ")";
              throw std::logic_error(message.str());
            }
            if (run.reward > any.count || any.count > fix.count) {
              std::ostringstream message;
              message << "pathwise sandwich violated for policy " << policies[p]->name()
                      << ": reward=" << run.reward << " ho_any=" << any.count
                      << " ho_fix=" << fix.count << " (horizon " << horizon << ", rep " << rep
                      << ")";
              throw std::logic_error(message.str());
            }
            record.rewards[p] = run.reward;
            if (config.diagnostics) {
              const WrongDecisionReport report = classify_wrong_decisions(path, run.trace);
              record.wrong_accepts[p] = report.wrong_accepts;
              record.wrong_rejects[p] = report.wrong_rejects;
            }
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };

    int thread_count = config.threads > 0
                           ? config.threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    thread_count = std::max(1, std::min(thread_count, replications));
    {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(thread_count));
      for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
      for (auto& thread : pool) thread.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Deterministic fold in replication order.
    for (std::size_t p = 0; p < config.policies.size(); ++p) {
      const PolicySpec& spec = config.policies[p];
      const bool exact_dp = spec.kind == PolicyKind::kDpExact;
      for (const Benchmark benchmark : config.benchmarks) {
        double sum_regret = 0.0, sum_reward = 0.0;
        for (int rep = 0; rep < replications; ++rep) {
          const RepRecord& record = records[static_cast<std::size_t>(rep)];
          const double bench = benchmark_value(benchmark, record, discrete, dlp_value, dp_val);
          const double reward = exact_dp ? dp_exact_val : static_cast<double>(record.rewards[p]);
          sum_regret += bench - reward;
          sum_reward += reward;
        }
        const double mean_regret = sum_regret / replications;
        const double mean_reward = sum_reward / replications;
        double sq = 0.0;
        for (int rep = 0; rep < replications; ++rep) {
          const RepRecord& record = records[static_cast<std::size_t>(rep)];
          const double bench = benchmark_value(benchmark, record, discrete, dlp_value, dp_val);
          const double reward = exact_dp ? dp_exact_val : static_cast<double>(record.rewards[p]);
          const double dev = (bench - reward) - mean_regret;
          sq += dev * dev;
        }
        const double se =
            replications > 1 ? std::sqrt(sq / (replications - 1) / replications) : 0.0;
        ResultRow row;
        row.policy = std::string(policy_name(spec.kind));
        row.horizon = horizon;
        row.benchmark = std::string(benchmark_name(benchmark));
        row.mean_regret = mean_regret;
        row.stderr_regret = se;
        row.mean_reward = mean_reward;
        row.replications = replications;
        row.seed = config.seed;
        result.rows.push_back(std::move(row));
      }
      if (config.diagnostics && !exact_dp) {
        DiagnosticsRow diag;
        diag.policy = std::string(policy_name(spec.kind));
        diag.horizon = horizon;
        double wa = 0.0, wr = 0.0;
        for (int rep = 0; rep < replications; ++rep) {
          wa += records[static_cast<std::size_t>(rep)].wrong_accepts[p];
          wr += records[static_cast<std::size_t>(rep)].wrong_rejects[p];
        }
        diag.mean_wrong_accepts = wa / replications;
        diag.mean_wrong_rejects = wr / replications;
        result.diagnostics.push_back(std::move(diag));
      }
    }
  }
  return result;
}

WrongDecisionReport classify_wrong_decisions(const SamplePath& path, const DecisionTrace& trace,
                                             MixOracle oracle) {
  const FeasibilityVerdict verdict = validate_feasibility(path, trace);
  if (!verdict.ok) throw std::invalid_argument("classify_wrong_decisions: infeasible trace");
  const int horizon = path.horizon();
  WrongDecisionReport report;
  report.wrong_accept_at.assign(static_cast<std::size_t>(horizon), 0);
  report.wrong_reject_at.assign(static_cast<std::size_t>(horizon), 0);
  report.step_loss.assign(static_cast<std::size_t>(horizon), 0);

  // H[t-1] = oracle value of the suffix starting at t, seeded with the
  // policy's realized budget before t; H[horizon] = 0.
  std::vector<int> suffix_value(static_cast<std::size_t>(horizon) + 1, 0);

  if (path.is_discrete()) {
    std::int64_t budget = 0;
    std::vector<std::int64_t> budgets(static_cast<std::size_t>(horizon) + 1, 0);
    for (int t = 1; t <= horizon; ++t) {
      if (trace[static_cast<std::size_t>(t - 1)]) budget -= path.lattice[static_cast<std::size_t>(t - 1)];
      budgets[static_cast<std::size_t>(t)] = budget;
    }
    for (int t = 1; t <= horizon; ++t) {
      const std::span<const std::int64_t> suffix(path.lattice.data() + (t - 1),
                                                 static_cast<std::size_t>(horizon - t + 1));
      const std::int64_t b = budgets[static_cast<std::size_t>(t - 1)];
      suffix_value[static_cast<std::size_t>(t - 1)] =
          oracle == MixOracle::kBruteForce ? ho_any_brute_force_span(suffix, b).count
                                           : ho_any_span(suffix, b).count;
    }
  } else {
    double budget = 0.0;
    std::vector<double> budgets(static_cast<std::size_t>(horizon) + 1, 0.0);
    for (int t = 1; t <= horizon; ++t) {
      if (trace[static_cast<std::size_t>(t - 1)]) budget -= path.costs[static_cast<std::size_t>(t - 1)];
      budgets[static_cast<std::size_t>(t)] = budget;
    }
    if (oracle == MixOracle::kBruteForce)
      throw std::invalid_argument("classify_wrong_decisions: brute force needs a lattice path");
    for (int t = 1; t <= horizon; ++t) {
      const std::span<const double> suffix(path.costs.data() + (t - 1),
                                           static_cast<std::size_t>(horizon - t + 1));
      suffix_value[static_cast<std::size_t>(t - 1)] =
          ho_any_span(suffix, budgets[static_cast<std::size_t>(t - 1)]).count;
    }
  }

  report.oracle_full_value = suffix_value.front();
  for (int t = 1; t <= horizon; ++t) {
    const std::size_t idx = static_cast<std::size_t>(t - 1);
    const int accepted = trace[idx] ? 1 : 0;
    const int loss = suffix_value[idx] - accepted - suffix_value[idx + 1];
    report.step_loss[idx] = loss;
    if (loss > 0) {
      if (accepted) {
        report.wrong_accept_at[idx] = 1;
        ++report.wrong_accepts;
      } else {
        report.wrong_reject_at[idx] = 1;
        ++report.wrong_rejects;
      }
    }
  }
  return report;
}

SlopeFit loglog_slope(std::span<const std::pair<double, double>> series) {
  std::vector<std::pair<double, double>> logs;
  logs.reserve(series.size());
  for (const auto& [x, y] : series) {
    if (x <= 0.0 || y <= 0.0) continue;
    logs.emplace_back(std::log(x), std::log(y));
  }
  SlopeFit fit;
  fit.points = static_cast<int>(logs.size());
  if (fit.points < 2) throw std::invalid_argument("loglog_slope: need at least two positive points");
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : logs) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= fit.points;
  mean_y /= fit.points;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: degenerate abscissae");
  fit.slope = sxy / sxx;
  if (fit.points > 2) {
    double rss = 0.0;
    for (const auto& [x, y] : logs) {
      const double resid = y - mean_y - fit.slope * (x - mean_x);
      rss += resid * resid;
    }
    fit.stderr_slope = std::sqrt(rss / (fit.points - 2) / sxx);
  }
  return fit;
}

}  // namespace lfdr
