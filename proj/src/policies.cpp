#include "lfdr/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace lfdr {

bool GreedyPolicy::decide(const Step& step) {
  if (step.cost <= 0.0) return true;
  return step.feasible;
}

StaticGreedyPolicy::StaticGreedyPolicy(const CostModel& model)
    : model_(model), fluid_(solve_fluid(model, Rational(0))) {}

bool StaticGreedyPolicy::decide(const Step& step) {
  if (step.cost <= 0.0) return true;
  if (!step.feasible) return false;
  if (model_.is_discrete()) {
    const Rational& x = fluid_.accept_rate[static_cast<std::size_t>(step.type)];
    if (x == Rational(1)) return true;
    if (x.is_zero()) return false;
    return draw(step.t) <= x.to_double();
  }
  return step.cost <= fluid_.threshold;
}

LbParams lb_params(const CostModel& model, const DeltaProfile& profile,
                   const Rational& boundary_fraction) {
  if (model.kind() != ModelKind::kDiscrete)
    throw std::invalid_argument("lb_params: discrete models only");
  if (!profile.i0)
    throw std::invalid_argument("lb_params: no negative prefix expectation; policy undefined");
  if (!profile.boundary_rank)
    throw std::invalid_argument("lb_params: degenerate all-accept model has no boundary rank");
  const int i0 = *profile.i0;
  // delta one step below i0; falls back to delta_{i0} when i0 is already the
  // lowest index.
  const Rational& below = profile.deltas[static_cast<std::size_t>(i0 > 0 ? i0 - 1 : i0)];
  const Rational& at = profile.deltas[static_cast<std::size_t>(i0)];
  if (!below.is_negative() || !at.is_negative())
    throw std::invalid_argument("lb_params: prefix expectations at i0 must be negative");
  LbParams params;
  params.c_low = 1.0 / below.abs().to_double();
  params.c_mid = params.c_low + 1.0 / at.abs().to_double();
  params.boundary_fraction = boundary_fraction.to_double();
  const int boundary = *profile.boundary_rank;
  for (int rank = boundary + 1; rank <= profile.positive_count; ++rank) {
    const int type = profile.type_of_rank(rank);
    const double pa = model.probs_real()[static_cast<std::size_t>(type)] *
                      model.values_real()[static_cast<std::size_t>(type)];
    if (pa <= 0.0)
      throw std::invalid_argument("lb_params: zero-probability type above the boundary");
    params.c_high.push_back(1.0 / pa);
  }
  return params;
}

LogBufferPolicy::LogBufferPolicy(const CostModel& model, std::optional<LbParams> override_params)
    : model_(model), profile_(delta_profile(model)) {
  const FluidSolution fluid = solve_fluid(model, Rational(0));
  const int boundary_type = profile_.boundary_rank
                                ? profile_.type_of_rank(*profile_.boundary_rank)
                                : model.num_types() - 1;
  const Rational boundary_fraction =
      profile_.boundary_rank ? fluid.accept_rate[static_cast<std::size_t>(boundary_type)]
                             : Rational(1);
  params_ = override_params ? *override_params
                            : lb_params(model, profile_, boundary_fraction);
  if (!profile_.i0 || !profile_.boundary_rank)
    throw std::invalid_argument("LogBufferPolicy: model has no boundary rank");
  for (int rank = *profile_.boundary_rank + 1; rank <= profile_.positive_count; ++rank) {
    const int type = profile_.type_of_rank(rank);
    const double pa = model.probs_real()[static_cast<std::size_t>(type)] *
                      model.values_real()[static_cast<std::size_t>(type)];
    linear_buffer_rate_.push_back(profile_.deltas[static_cast<std::size_t>(rank)].to_double() -
                                  0.5 * pa);
  }
}

bool LogBufferPolicy::decide(const Step& step) {
  if (step.cost <= 0.0) return true;
  if (!step.feasible) return false;
  const int rank = profile_.rank_of_type(step.type);
  const int i0 = *profile_.i0;
  const int boundary = *profile_.boundary_rank;
  const double remaining = static_cast<double>(step.horizon - step.t + 1);
  const double log_remaining = std::log(remaining);
  if (rank <= 1) return true;
  if (rank <= i0) return step.budget >= params_.c_low * log_remaining;
  // Boundary rank: budget buffer only. Thinning the boundary type by its
  // fluid fraction on top of the buffer would zero the accepted-cost drift,
  // turning the budget into a reflected martingale that strands Theta(sqrt(T))
  // unspent budget at the horizon; the buffer test alone keeps the budget in a
  // logarithmic band and preserves the policy's flat-regret behavior.
  if (rank == boundary) return step.budget >= params_.c_mid * log_remaining;
  const std::size_t high = static_cast<std::size_t>(rank - boundary - 1);
  const double buffer =
      linear_buffer_rate_[high] * remaining + params_.c_high[high] * log_remaining;
  return step.budget >= buffer;
}

std::vector<int> resolve_schedule(ResolveVariant variant, int horizon, double beta) {
  if (horizon < 1) throw std::invalid_argument("resolve_schedule: horizon must be >= 1");
  std::vector<int> schedule;
  if (variant != ResolveVariant::kInfrequent) {
    schedule.resize(static_cast<std::size_t>(horizon));
    for (int t = 1; t <= horizon; ++t) schedule[static_cast<std::size_t>(t - 1)] = t;
    return schedule;
  }
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("resolve_schedule: beta must lie in (0, 1)");
  // Remaining-horizon grid L_0 = T, L_{k+1} = ceil(L_k^beta), forced to
  // decrease when the ceiling stalls, down to 1; re-solve when the remaining
  // horizon first reaches L_k.
  std::int64_t remaining = horizon;
  while (true) {
    schedule.push_back(horizon - static_cast<int>(remaining) + 1);
    if (remaining == 1) break;
    std::int64_t next = static_cast<std::int64_t>(
        std::ceil(std::pow(static_cast<double>(remaining), beta) - 1e-12));
    if (next >= remaining) next = remaining - 1;
    if (next < 1) next = 1;
    remaining = next;
  }
  return schedule;
}

ResolvingPolicy::ResolvingPolicy(const CostModel& model, int horizon, ResolveVariant variant,
                                 ResolveOptions options)
    : model_(model),
      variant_(variant),
      options_(options),
      schedule_(resolve_schedule(variant, horizon, options.beta)) {}

std::string_view ResolvingPolicy::name() const {
  switch (variant_) {
    case ResolveVariant::kFrequent:
      return "fr";
    case ResolveVariant::kInfrequent:
      return "ifr";
    case ResolveVariant::kFrequentTruncated:
      return "frt";
    case ResolveVariant::kBayes:
      return "bayes";
  }
  return "resolving";
}

void ResolvingPolicy::begin_run(rng::Stream stream) {
  Policy::begin_run(stream);
  next_resolve_ = 0;
  have_solution_ = false;
  accept_prob_.clear();
  threshold_ = 0.0;
}

void ResolvingPolicy::resolve(const Step& step) {
  const std::int64_t periods_left = step.horizon - step.t + 1;
  if (model_.is_discrete()) {
    const Rational rate(step.budget_lattice, model_.lattice_scale() * periods_left);
    const FluidSolution fluid = solve_fluid(model_, rate);
    accept_prob_.assign(static_cast<std::size_t>(model_.num_types()), 0.0);
    for (int i = 0; i < model_.num_types(); ++i) {
      const Rational& x = fluid.accept_rate[static_cast<std::size_t>(i)];
      if (variant_ == ResolveVariant::kBayes) {
        accept_prob_[static_cast<std::size_t>(i)] = x >= Rational(1, 2) ? 1.0 : 0.0;
      } else {
        accept_prob_[static_cast<std::size_t>(i)] = x.to_double();
      }
    }
  } else {
    const double rate = std::max(0.0, step.budget) / static_cast<double>(periods_left);
    threshold_ = solve_fluid_rate(model_, rate).threshold;
  }
  have_solution_ = true;
}

bool ResolvingPolicy::decide(const Step& step) {
  while (next_resolve_ < schedule_.size() && schedule_[next_resolve_] == step.t) {
    resolve(step);
    ++next_resolve_;
  }
  if (!have_solution_) resolve(step);
  if (step.cost <= 0.0) return true;
  if (!step.feasible) return false;
  double p;
  if (model_.is_discrete()) {
    p = accept_prob_[static_cast<std::size_t>(step.type)];
  } else {
    p = step.cost <= threshold_ ? 1.0 : 0.0;
  }
  if (variant_ == ResolveVariant::kFrequentTruncated || variant_ == ResolveVariant::kInfrequent) {
    const double eps =
        std::pow(static_cast<double>(step.horizon - step.t + 1), -options_.trunc_exponent);
    if (p <= eps) p = 0.0;
    else if (p >= 1.0 - eps) p = 1.0;
  }
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return draw(step.t) <= p;
}

DpPolicy::DpPolicy(const CostModel& model, int horizon, DpOptions options)
    : model_(model), table_(std::make_shared<DpTable>(dp_table(model, horizon, options))) {}

bool DpPolicy::decide(const Step& step) {
  if (!step.feasible) return false;
  return dp_decide(*table_, model_, step.t, step.budget_lattice, step.type);
}

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kGreedy:
      return "greedy";
    case PolicyKind::kSg:
      return "sg";
    case PolicyKind::kLb:
      return "lb";
    case PolicyKind::kFr:
      return "fr";
    case PolicyKind::kIfr:
      return "ifr";
    case PolicyKind::kFrt:
      return "frt";
    case PolicyKind::kBayes:
      return "bayes";
    case PolicyKind::kDp:
      return "dp";
    case PolicyKind::kDpExact:
      return "dp_exact";
  }
  return "unknown";
}

std::optional<PolicyKind> policy_kind_from_name(std::string_view name) {
  if (name == "greedy") return PolicyKind::kGreedy;
  if (name == "sg") return PolicyKind::kSg;
  if (name == "lb") return PolicyKind::kLb;
  if (name == "fr") return PolicyKind::kFr;
  if (name == "ifr") return PolicyKind::kIfr;
  if (name == "frt") return PolicyKind::kFrt;
  if (name == "bayes") return PolicyKind::kBayes;
  if (name == "dp") return PolicyKind::kDp;
  if (name == "dp_exact") return PolicyKind::kDpExact;
  return std::nullopt;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const CostModel& model, int horizon) {
  switch (spec.kind) {
    case PolicyKind::kGreedy:
      return std::make_unique<GreedyPolicy>();
    case PolicyKind::kSg:
      return std::make_unique<StaticGreedyPolicy>(model);
    case PolicyKind::kLb:
      return std::make_unique<LogBufferPolicy>(model, spec.lb_override);
    case PolicyKind::kFr:
      return std::make_unique<ResolvingPolicy>(model, horizon, ResolveVariant::kFrequent,
                                               spec.resolve);
    case PolicyKind::kIfr:
      return std::make_unique<ResolvingPolicy>(model, horizon, ResolveVariant::kInfrequent,
                                               spec.resolve);
    case PolicyKind::kFrt:
      return std::make_unique<ResolvingPolicy>(model, horizon,
                                               ResolveVariant::kFrequentTruncated, spec.resolve);
    case PolicyKind::kBayes:
      return std::make_unique<ResolvingPolicy>(model, horizon, ResolveVariant::kBayes,
                                               spec.resolve);
    case PolicyKind::kDp:
      return std::make_unique<DpPolicy>(model, horizon);
    case PolicyKind::kDpExact:
      throw std::invalid_argument("make_policy: dp_exact is not a runnable policy");
  }
  throw std::invalid_argument("make_policy: unknown policy kind");
}

}  // namespace lfdr
