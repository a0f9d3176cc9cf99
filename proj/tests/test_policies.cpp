#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lfdr/cost_model.hpp"
#include "lfdr/fluid.hpp"
#include "lfdr/policies.hpp"
#include "lfdr/rng.hpp"
#include "lfdr/sim.hpp"

using namespace lfdr;

namespace {

CostModel model_a() {
  return CostModel::discrete({Rational(-2), Rational(3), Rational(4)},
                             {Rational(3, 5), Rational(3, 10), Rational(1, 10)});
}

CostModel model_b() {
  return CostModel::discrete(
      {Rational(-2), Rational(1), Rational(3), Rational(6), Rational(8)},
      {Rational(1, 2), Rational(1, 10), Rational(1, 10), Rational(1, 10), Rational(1, 5)});
}

Step make_step(int t, int horizon, double budget, double cost, int type) {
  Step step;
  step.t = t;
  step.horizon = horizon;
  step.budget = budget;
  step.budget_lattice = static_cast<std::int64_t>(std::llround(budget));
  step.cost = cost;
  step.type = type;
  step.feasible = cost <= budget;
  return step;
}

}  // namespace

TEST_CASE("greedy accepts exactly the feasible arrivals") {
  GreedyPolicy greedy;
  CHECK(greedy.decide(make_step(1, 10, 0.0, -1.0, 0)));
  CHECK(!greedy.decide(make_step(1, 10, 0.0, 1.0, 1)));
  CHECK(greedy.decide(make_step(2, 10, 1.0, 1.0, 1)));
  CHECK(greedy.decide(make_step(2, 10, 5.0, 4.0, 2)));
  CHECK(!greedy.decide(make_step(2, 10, 3.0, 4.0, 2)));
}

TEST_CASE("static greedy on the uniform model uses the zero-rate threshold") {
  const CostModel u = CostModel::uniform(-0.05, 0.95);
  StaticGreedyPolicy sg(u);
  sg.begin_run(rng::Stream{1});
  // Threshold cost is 0.05: below it acceptance is limited by feasibility only.
  Step s = make_step(1, 100, 0.02, 0.03, -1);
  s.feasible = false;  // engine marks 0.03 > 0.02 infeasible
  CHECK(!sg.decide(s));
  CHECK(sg.decide(make_step(2, 100, 0.1, 0.04, -1)));
  CHECK(!sg.decide(make_step(3, 100, 10.0, 0.06, -1)));  // above the threshold
  CHECK(sg.decide(make_step(4, 100, 0.0, -0.01, -1)));
}

TEST_CASE("static greedy thins the boundary type by the fluid fraction") {
  StaticGreedyPolicy sg(model_a());
  const rng::Stream stream{909};
  sg.begin_run(stream);
  int accepted = 0;
  for (int t = 1; t <= 400; ++t) {
    const bool took = sg.decide(make_step(t, 400, 100.0, 4.0, 2));
    CHECK(took == (stream.uniform_at(static_cast<std::uint64_t>(t)) <= 0.75));
    accepted += took;
  }
  CHECK(accepted > 250);  // ~300 expected
  CHECK(accepted < 350);
  // Sub-boundary types are never thinned.
  CHECK(sg.decide(make_step(401, 500, 100.0, 3.0, 1)));
  CHECK(sg.decide(make_step(402, 500, 100.0, -2.0, 0)));
}

TEST_CASE("static greedy never takes types above the boundary") {
  StaticGreedyPolicy sg(model_b());  // zero-rate fluid: x = [1,1,1,1,0]
  sg.begin_run(rng::Stream{17});
  for (int t = 1; t <= 50; ++t) CHECK(!sg.decide(make_step(t, 50, 1000.0, 8.0, 4)));
  CHECK(sg.decide(make_step(51, 100, 1000.0, 6.0, 3)));  // boundary x = 1, no draw
}

TEST_CASE("buffer constants for the first experiment model") {
  const DeltaProfile profile = delta_profile(model_a());
  const LbParams params = lb_params(model_a(), profile, Rational(3, 4));
  CHECK(params.c_low == doctest::Approx(5.0 / 6.0));           // 1 / |delta_0|
  CHECK(params.c_mid == doctest::Approx(5.0 / 6.0 + 10.0 / 3.0));  // + 1 / |delta_1|
  CHECK(params.c_high.empty());
  CHECK(params.boundary_fraction == doctest::Approx(0.75));
}

TEST_CASE("buffer constants for the degenerate model include the high type") {
  const DeltaProfile profile = delta_profile(model_b());
  const LbParams params = lb_params(model_b(), profile, Rational(1));
  CHECK(params.c_low == doctest::Approx(1.0 / 0.9));
  CHECK(params.c_mid == doctest::Approx(1.0 / 0.9 + 1.0 / 0.6));
  REQUIRE(params.c_high.size() == 1);
  CHECK(params.c_high[0] == doctest::Approx(1.0 / 1.6));  // 1 / (p * a) for cost 8
}

TEST_CASE("buffer constants fall back to delta_0 when i0 is the lowest rank") {
  const CostModel walk =
      CostModel::discrete({Rational(-1), Rational(1)}, {Rational(1, 2), Rational(1, 2)});
  const DeltaProfile profile = delta_profile(walk);
  CHECK(profile.i0 == 0);
  CHECK(profile.boundary_rank == 1);
  const LbParams params = lb_params(walk, profile, Rational(1));
  CHECK(params.c_low == doctest::Approx(2.0));
  CHECK(params.c_mid == doctest::Approx(4.0));
}

TEST_CASE("buffer policy needs a boundary rank") {
  const CostModel heavy =
      CostModel::discrete({Rational(-2), Rational(1)}, {Rational(9, 10), Rational(1, 10)});
  CHECK_THROWS_AS(LogBufferPolicy{heavy}, std::invalid_argument);
  const CostModel positive =
      CostModel::discrete({Rational(1), Rational(2)}, {Rational(1, 2), Rational(1, 2)});
  CHECK_THROWS_AS(LogBufferPolicy{positive}, std::invalid_argument);
}

TEST_CASE("buffer policy decision rows on the degenerate model") {
  LogBufferPolicy lb(model_b());
  lb.begin_run(rng::Stream{5});
  const int horizon = 200, t = 100;  // T - t + 1 = 101
  const double logr = std::log(101.0);
  const LbParams& p = lb.params();

  // Nonpositive costs are always taken; rank 1 needs only feasibility.
  CHECK(lb.decide(make_step(t, horizon, 0.0, -2.0, 0)));
  CHECK(lb.decide(make_step(t, horizon, 1.0, 1.0, 1)));
  CHECK(!lb.decide(make_step(t, horizon, 0.0, 1.0, 1)));  // infeasible

  // Rank 2 (cost 3) sits behind the low buffer c_low * ln(T-t+1) ~ 5.13.
  CHECK(p.c_low * logr == doctest::Approx(5.1279).epsilon(1e-3));
  CHECK(!lb.decide(make_step(t, horizon, 5.0, 3.0, 2)));
  CHECK(lb.decide(make_step(t, horizon, 6.0, 3.0, 2)));

  // Boundary rank (cost 6) behind c_mid * ln(T-t+1) ~ 12.82.
  CHECK(!lb.decide(make_step(t, horizon, 12.0, 6.0, 3)));
  CHECK(lb.decide(make_step(t, horizon, 13.0, 6.0, 3)));

  // High rank (cost 8) behind the linear buffer
  // (delta_4 - p a / 2)(T-t+1) + c_high ln(T-t+1) = 0.8 * 101 + 0.625 ln 101.
  const double high_buffer = 0.8 * 101 + p.c_high[0] * logr;
  CHECK(high_buffer == doctest::Approx(83.684).epsilon(1e-3));
  CHECK(!lb.decide(make_step(t, horizon, 80.0, 8.0, 4)));
  CHECK(lb.decide(make_step(t, horizon, 84.0, 8.0, 4)));
}

TEST_CASE("buffer policy accepts boundary arrivals above the buffer without thinning") {
  // The boundary coin would strand sqrt(T)-scale budget; above the buffer the
  // rule is budget-only, so two different draw streams give identical traces.
  LogBufferPolicy lb(model_a());
  const SamplePath path = sample_path(model_a(), 4000, rng::path_stream(11, 0));
  const RunResult r1 = run_policy(lb, path, rng::stream_key(11, 0, rng::kPolicySalt));
  const RunResult r2 = run_policy(lb, path, rng::stream_key(99, 7, rng::kPolicySalt));
  CHECK(r1.trace == r2.trace);  // consumes no randomness
  const double buffer_at_1 = lb.params().c_mid * std::log(4000.0);
  CHECK(lb.decide(make_step(1, 4000, buffer_at_1 + 1.0, 4.0, 2)));
  CHECK(!lb.decide(make_step(1, 4000, buffer_at_1 - 1.0, 4.0, 2)));
}

TEST_CASE("buffer policy with zero constants degenerates to greedy") {
  LbParams zero;
  zero.c_low = 0.0;
  zero.c_mid = 0.0;
  zero.boundary_fraction = 0.75;  // ignored by the budget-only boundary row
  LogBufferPolicy lb(model_a(), zero);
  GreedyPolicy greedy;
  const SamplePath path = sample_path(model_a(), 2000, rng::path_stream(21, 3));
  const RunResult lb_run = run_policy(lb, path, rng::stream_key(21, 3, rng::kPolicySalt));
  const RunResult greedy_run = run_policy(greedy, path, rng::stream_key(21, 3, rng::kPolicySalt));
  CHECK(lb_run.trace == greedy_run.trace);
  CHECK(lb_run.reward == greedy_run.reward);
}

TEST_CASE("re-solve schedules") {
  CHECK(resolve_schedule(ResolveVariant::kFrequent, 5, 0.5) == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(resolve_schedule(ResolveVariant::kBayes, 3, 0.5) == std::vector<int>{1, 2, 3});
  CHECK(resolve_schedule(ResolveVariant::kFrequentTruncated, 4, 0.5) ==
        std::vector<int>{1, 2, 3, 4});

  const std::vector<int> geo = resolve_schedule(ResolveVariant::kInfrequent, 4096, 5.0 / 6.0);
  REQUIRE(geo.size() >= 3);
  CHECK(geo[0] == 1);
  CHECK(geo[1] == 4096 - 1024 + 1);  // remaining drops to 4096^(5/6) = 1024
  CHECK(geo[2] == 4096 - 323 + 1);   // then ceil(1024^(5/6)) = 323
  CHECK(geo.back() == 4096);         // ends at remaining = 1
  for (std::size_t i = 1; i < geo.size(); ++i) CHECK(geo[i] > geo[i - 1]);

  CHECK(resolve_schedule(ResolveVariant::kInfrequent, 2, 5.0 / 6.0) == std::vector<int>{1, 2});
  CHECK(resolve_schedule(ResolveVariant::kInfrequent, 1, 5.0 / 6.0) == std::vector<int>{1});
  CHECK_THROWS_AS(resolve_schedule(ResolveVariant::kInfrequent, 10, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(resolve_schedule(ResolveVariant::kInfrequent, 10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(resolve_schedule(ResolveVariant::kFrequent, 0, 0.5), std::invalid_argument);
}

TEST_CASE("re-solving policies adapt the acceptance rate to the realized budget") {
  // After two -2 arrivals the budget rate is 4 over one remaining period, so
  // the re-solved fluid accepts everything, including the boundary cost 4.
  SamplePath path;
  path.costs = {-2.0, -2.0, 4.0};
  path.types = {0, 0, 2};
  path.lattice = {-2, -2, 4};
  path.scale = 1;
  for (const ResolveVariant variant : {ResolveVariant::kFrequent, ResolveVariant::kBayes}) {
    ResolvingPolicy policy(model_a(), 3, variant);
    const RunResult run = run_policy(policy, path, 123);
    CHECK(run.trace == DecisionTrace{1, 1, 1});
    CHECK(run.reward == 3);
  }
  // The truncated variant clips with epsilon = (T-t+1)^(-1/4), which reaches 1
  // in the final period: the low-side clip fires first and zeroes even a
  // saturated rate, so the last arrival is rejected.
  ResolvingPolicy frt(model_a(), 3, ResolveVariant::kFrequentTruncated);
  const RunResult run = run_policy(frt, path, 123);
  CHECK(run.trace == DecisionTrace{1, 1, 0});
  CHECK(run.reward == 2);
}

TEST_CASE("bayes rounds the fractional boundary to a hard threshold") {
  // Budget 4 spread over ~100 periods re-solves to x(cost 4) ~ 0.85: the
  // frequent policy would coin-flip, bayes rounds up and always accepts.
  ResolvingPolicy bayes(model_a(), 100, ResolveVariant::kBayes);
  bayes.begin_run(rng::Stream{4});
  for (int t = 1; t <= 50; ++t) CHECK(bayes.decide(make_step(t, 100, 4.0, 4.0, 2)));

  // Where the re-solved fraction sits below 1/2 bayes rejects outright.
  // Fluid at rate 0 on a model with x* = 1/4: values [-1, 4], probs 1/2 each.
  const CostModel quarter =
      CostModel::discrete({Rational(-1), Rational(4)}, {Rational(1, 2), Rational(1, 2)});
  CHECK(solve_fluid(quarter, Rational(0)).boundary_fraction == Rational(1, 4));
  ResolvingPolicy b2(quarter, 50, ResolveVariant::kBayes);
  b2.begin_run(rng::Stream{4});
  // Budget 10 over 50 periods: x = (0.2 + 0.5) / 2 = 0.35 < 1/2 -> reject.
  CHECK(!b2.decide(make_step(1, 50, 10.0, 4.0, 1)));
}

TEST_CASE("truncated variants clip near-one and near-zero rates") {
  // epsilon = (T - t + 1)^(-1/4); rates <= eps drop to 0, rates >= 1 - eps
  // rise to 1, with the low-side test applied first.

  // Upper clip: [-2, 3, 40] at budget 40 with 16 periods left re-solves to
  // x(40) = 0.7 >= 1 - 16^(-1/4) = 1/2, so acceptance is deterministic.
  const CostModel wide =
      CostModel::discrete({Rational(-2), Rational(3), Rational(40)},
                          {Rational(3, 5), Rational(3, 10), Rational(1, 10)});
  ResolvingPolicy up(wide, 20, ResolveVariant::kFrequentTruncated);
  up.begin_run(rng::Stream{8});
  for (int rep = 0; rep < 8; ++rep) CHECK(up.decide(make_step(5, 20, 40.0, 40.0, 2)));

  // Lower clip: top type of the degenerate model at budget 10, 16 periods
  // left: x = (10/16) / 1.6 ~ 0.39 <= 1/2, so rejection is deterministic.
  ResolvingPolicy down(model_b(), 20, ResolveVariant::kFrequentTruncated);
  down.begin_run(rng::Stream{9});
  for (int rep = 0; rep < 8; ++rep) CHECK(!down.decide(make_step(5, 20, 10.0, 8.0, 4)));

  // Final period: eps = 1 zeroes every positive-cost rate, saturated or not,
  // while nonpositive costs bypass the clip entirely.
  ResolvingPolicy last(model_a(), 16, ResolveVariant::kFrequentTruncated);
  last.begin_run(rng::Stream{10});
  CHECK(last.decide(make_step(15, 16, 4.0, 3.0, 1)));  // eps ~ 0.84, x = 1 survives
  CHECK(!last.decide(make_step(16, 16, 4.0, 4.0, 2)));
  CHECK(!last.decide(make_step(16, 16, 4.0, 3.0, 1)));
  CHECK(last.decide(make_step(16, 16, 4.0, -2.0, 0)));
}

TEST_CASE("bayes equals greedy when every fluid rate is saturated") {
  const CostModel all_one = CostModel::discrete(
      {Rational(-1, 2), Rational(1, 2), Rational(1)},
      {Rational(3, 5), Rational(1, 5), Rational(1, 5)});
  // Zero-rate fluid: -0.3 + 0.1 + 0.2 = 0, all rates 1.
  const FluidSolution fluid = solve_fluid(all_one, Rational(0));
  CHECK(fluid.value_rate_exact == Rational(1));
  ResolvingPolicy bayes(all_one, 300, ResolveVariant::kBayes);
  GreedyPolicy greedy;
  const SamplePath path = sample_path(all_one, 300, rng::path_stream(31, 0));
  const std::uint64_t key = rng::stream_key(31, 0, rng::kPolicySalt);
  CHECK(run_policy(bayes, path, key).trace == run_policy(greedy, path, key).trace);
}

TEST_CASE("policy names and factory") {
  CHECK(policy_name(PolicyKind::kGreedy) == "greedy");
  CHECK(policy_name(PolicyKind::kSg) == "sg");
  CHECK(policy_name(PolicyKind::kLb) == "lb");
  CHECK(policy_name(PolicyKind::kFr) == "fr");
  CHECK(policy_name(PolicyKind::kIfr) == "ifr");
  CHECK(policy_name(PolicyKind::kFrt) == "frt");
  CHECK(policy_name(PolicyKind::kBayes) == "bayes");
  CHECK(policy_name(PolicyKind::kDp) == "dp");
  CHECK(policy_name(PolicyKind::kDpExact) == "dp_exact");
  for (const char* name : {"greedy", "sg", "lb", "fr", "ifr", "frt", "bayes", "dp", "dp_exact"}) {
    REQUIRE(policy_kind_from_name(name).has_value());
    CHECK(policy_name(*policy_kind_from_name(name)) == name);
  }
  CHECK(!policy_kind_from_name("nope").has_value());

  PolicySpec spec;
  spec.kind = PolicyKind::kLb;
  CHECK(make_policy(spec, model_a(), 100)->name() == "lb");
  spec.kind = PolicyKind::kDpExact;
  CHECK_THROWS_AS(make_policy(spec, model_a(), 100), std::invalid_argument);
}

TEST_CASE("policy clones are independent but identically seeded") {
  ResolvingPolicy fr(model_a(), 600, ResolveVariant::kFrequent);
  const SamplePath path = sample_path(model_a(), 600, rng::path_stream(77, 0));
  auto clone = fr.clone();
  const RunResult a = run_policy(fr, path, 555);
  const RunResult b = run_policy(*clone, path, 555);
  CHECK(a.trace == b.trace);
  // Re-running the original must reproduce (begin_run resets state).
  const RunResult c = run_policy(fr, path, 555);
  CHECK(a.trace == c.trace);
}
