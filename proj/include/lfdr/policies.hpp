#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lfdr/cost_model.hpp"
#include "lfdr/fluid.hpp"
#include "lfdr/oracles.hpp"
#include "lfdr/rng.hpp"

namespace lfdr {

// What a policy sees at period t. The engine owns the budget and computes
// feasibility exactly (lattice integers for discrete paths), so policies never
// re-derive it from doubles.
struct Step {
  int t = 0;        // 1-based period
  int horizon = 0;  // T
  double budget = 0.0;
  std::int64_t budget_lattice = 0;  // discrete paths only
  double cost = 0.0;
  int type = -1;  // discrete type index; -1 on continuous paths
  bool feasible = false;
};

// Online acceptance rule. Policies are stateful across one run (re-solve
// caches); begin_run resets that state and installs the run's draw stream.
// Draw t comes from a counter-based stream, so a draw is consumed only when a
// rule actually randomizes and simultaneous policies stay aligned.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual void begin_run(rng::Stream stream) { stream_ = stream; }
  virtual bool decide(const Step& step) = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;

 protected:
  double draw(int t) const { return stream_.uniform_at(static_cast<std::uint64_t>(t)); }

 private:
  rng::Stream stream_{};
};

// Accepts whenever the budget covers the cost.
class GreedyPolicy final : public Policy {
 public:
  std::string_view name() const override { return "greedy"; }
  bool decide(const Step& step) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<GreedyPolicy>(*this); }
};

// Plays the budget-rate-zero fluid solution: accept below the threshold cost
// when feasible, thin the threshold cost by its fluid fraction.
class StaticGreedyPolicy final : public Policy {
 public:
  explicit StaticGreedyPolicy(const CostModel& model);
  std::string_view name() const override { return "sg"; }
  bool decide(const Step& step) override;
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<StaticGreedyPolicy>(*this);
  }

 private:
  CostModel model_;
  FluidSolution fluid_;
};

// Buffer constants for the logarithmic-buffer policy, one regime per positive
// rank: ranks in (1, i0] share c_low, the boundary rank i0+1 uses c_mid, and
// each rank above the boundary gets a linear-in-remaining-horizon buffer with
// its own log coefficient.
struct LbParams {
  double c_low = 0.0;
  double c_mid = 0.0;
  std::vector<double> c_high;      // indexed by rank - (i0 + 2)
  double boundary_fraction = 1.0;  // fluid acceptance of the boundary rank
};

// Derives the defaults from the profile: c_low = 1/|delta_{i0-1}|,
// c_mid = c_low + 1/|delta_{i0}|, c_high[r] = 1/(p_r a_r). When i0 is the
// lowest index, delta_{i0-1} falls back to delta_0 and then to delta_{i0}.
// Requires a boundary rank (throws on degenerate all-accept profiles and when
// no prefix expectation is negative).
LbParams lb_params(const CostModel& model, const DeltaProfile& profile,
                   const Rational& boundary_fraction);

// Accepts positive ranks only with a budget buffer: none for rank <= 1,
// c_low * ln(T-t+1) up to i0, c_mid * ln(T-t+1) at the boundary rank, and
// (delta_r - p_r a_r / 2)(T-t+1) + c_r ln(T-t+1) above it. The boundary rank
// is deliberately not thinned by the fluid fraction x*: the buffer test alone
// keeps the budget mean-reverting (accepting every feasible boundary arrival
// above the buffer drains surplus), whereas thinning would strand
// Theta(sqrt(T)) budget at the horizon. x* still lives in LbParams because it
// is part of the derived constants bundle.
class LogBufferPolicy final : public Policy {
 public:
  LogBufferPolicy(const CostModel& model, std::optional<LbParams> override_params = std::nullopt);
  std::string_view name() const override { return "lb"; }
  bool decide(const Step& step) override;
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<LogBufferPolicy>(*this);
  }
  const LbParams& params() const { return params_; }

 private:
  CostModel model_;
  DeltaProfile profile_;
  LbParams params_;
  std::vector<double> linear_buffer_rate_;  // per high rank: delta_r - p_r a_r / 2
};

enum class ResolveVariant { kFrequent, kInfrequent, kFrequentTruncated, kBayes };

struct ResolveOptions {
  double beta = 5.0 / 6.0;          // infrequent schedule exponent
  double trunc_exponent = 0.25;     // epsilon(t) = (T - t + 1)^(-trunc_exponent)
};

// Periods at which the fluid relaxation is re-solved. Frequent variants (and
// Bayes) re-solve every period. The infrequent schedule re-solves when the
// remaining horizon first drops to L_k, where L_0 = T and L_{k+1} = ceil(L_k^beta)
// (decremented when the ceiling stalls) down to 1.
std::vector<int> resolve_schedule(ResolveVariant variant, int horizon, double beta);

// Re-solves the fluid relaxation at scheduled periods with the realized
// budget spread over the remaining horizon, then accepts type i with
// probability g(x_i): identity for the frequent variant, epsilon-truncation
// for the truncated ones, a hard 1/2 threshold for Bayes.
class ResolvingPolicy final : public Policy {
 public:
  ResolvingPolicy(const CostModel& model, int horizon, ResolveVariant variant,
                  ResolveOptions options = {});
  std::string_view name() const override;
  void begin_run(rng::Stream stream) override;
  bool decide(const Step& step) override;
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<ResolvingPolicy>(*this);
  }
  const std::vector<int>& schedule() const { return schedule_; }

 private:
  void resolve(const Step& step);

  CostModel model_;
  ResolveVariant variant_;
  ResolveOptions options_;
  std::vector<int> schedule_;
  std::size_t next_resolve_ = 0;
  std::vector<double> accept_prob_;  // x from the latest re-solve (pre-g for truncated variants)
  double threshold_ = 0.0;           // continuous models
  bool have_solution_ = false;
};

// Runs the exact DP as an online rule; the table is shared across clones.
class DpPolicy final : public Policy {
 public:
  DpPolicy(const CostModel& model, int horizon, DpOptions options = {});
  std::string_view name() const override { return "dp"; }
  bool decide(const Step& step) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<DpPolicy>(*this); }

 private:
  CostModel model_;
  std::shared_ptr<const DpTable> table_;
};

enum class PolicyKind { kGreedy, kSg, kLb, kFr, kIfr, kFrt, kBayes, kDp, kDpExact };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kGreedy;
  ResolveOptions resolve;
  std::optional<LbParams> lb_override;
};

std::string_view policy_name(PolicyKind kind);
std::optional<PolicyKind> policy_kind_from_name(std::string_view name);

// Builds a runnable policy; kDpExact has no online rule and is rejected here.
// The experiment harness reports it as the deterministic planner value under
// the pre-terminal convention (value function pinned to zero at the final
// period), whereas kDp and the dp benchmark decide all T arrivals.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const CostModel& model, int horizon);

}  // namespace lfdr
