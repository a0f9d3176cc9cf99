#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "lfdr/cost_model.hpp"
#include "lfdr/rational.hpp"
#include "lfdr/rng.hpp"

using namespace lfdr;

TEST_CASE("rational arithmetic stays reduced and exact") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(1, 8) == Rational(4));
  CHECK(-Rational(5, 7) == Rational(-5, 7));
  CHECK(Rational(-7, 2).abs() == Rational(7, 2));

  Rational acc(0);
  for (int i = 0; i < 10; ++i) acc += Rational(1, 10);
  CHECK(acc == Rational(1));  // no drift, unlike double 0.1
  acc -= Rational(3, 10);
  CHECK(acc == Rational(7, 10));
}

TEST_CASE("rational comparisons are exact cross multiplications") {
  CHECK(Rational(1, 3) < Rational(34, 100));
  CHECK(Rational(2, 3) > Rational(66, 100));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(Rational(1000000000, 3) < Rational(1000000001, 3));
  CHECK(Rational(0).is_zero());
  CHECK(Rational(-1, 5).is_negative());
  CHECK(Rational(1, 5).is_positive());
}

TEST_CASE("rational floor and ceil") {
  CHECK(Rational(7, 2).floor_int() == 3);
  CHECK(Rational(7, 2).ceil_int() == 4);
  CHECK(Rational(-7, 2).floor_int() == -4);
  CHECK(Rational(-7, 2).ceil_int() == -3);
  CHECK(Rational(6).floor_int() == 6);
  CHECK(Rational(6).ceil_int() == 6);
}

TEST_CASE("rational division by zero and overflow throw") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  const Rational big(std::numeric_limits<std::int64_t>::max());
  CHECK_THROWS_AS(big * Rational(2), std::overflow_error);
}

TEST_CASE("rational parse accepts integers, decimals, fractions") {
  CHECK(*Rational::parse("3") == Rational(3));
  CHECK(*Rational::parse("-7") == Rational(-7));
  CHECK(*Rational::parse("0.05") == Rational(1, 20));
  CHECK(*Rational::parse("-1/20") == Rational(-1, 20));
  CHECK(*Rational::parse("3/5") == Rational(3, 5));
  CHECK(*Rational::parse("2.5") == Rational(5, 2));
  CHECK(!Rational::parse("").has_value());
  CHECK(!Rational::parse("1/0").has_value());
  CHECK(!Rational::parse("x").has_value());
  CHECK(!Rational::parse("1.2.3").has_value());
  CHECK(!Rational::parse("1e3").has_value());
}

TEST_CASE("rational from_double recovers typed decimals") {
  CHECK(*Rational::from_double(0.6) == Rational(3, 5));
  CHECK(*Rational::from_double(0.1) == Rational(1, 10));
  CHECK(*Rational::from_double(5.0 / 6.0) == Rational(5, 6));
  CHECK(*Rational::from_double(-0.05) == Rational(-1, 20));
  CHECK(*Rational::from_double(0.0) == Rational(0));
  CHECK(*Rational::from_double(3.0) == Rational(3));
  CHECK(!Rational::from_double(std::nan("")).has_value());
}

TEST_CASE("counter rng is a pure function of key and counter") {
  rng::Stream a{42}, b{42}, c{43};
  CHECK(a.bits_at(7) == b.bits_at(7));
  CHECK(a.bits_at(7) != c.bits_at(7));
  // Order independence: reading 9 then 7 matches reading 7 directly.
  (void)b.bits_at(9);
  CHECK(a.bits_at(7) == b.bits_at(7));
  for (std::uint64_t t = 1; t <= 1000; ++t) {
    const double u = a.uniform_at(t);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("stream keys separate replications and salts") {
  std::set<std::uint64_t> keys;
  for (std::uint64_t rep = 0; rep < 100; ++rep)
    for (std::uint64_t salt = 1; salt <= 4; ++salt)
      keys.insert(rng::stream_key(123, rep, salt));
  CHECK(keys.size() == 400);
  CHECK(rng::path_stream(9, 3).key == rng::stream_key(9, 3, rng::kPathSalt));
  CHECK(rng::policy_stream(9, 3).key == rng::stream_key(9, 3, rng::kPolicySalt));
}

TEST_CASE("discrete model validation") {
  CHECK_THROWS_AS(CostModel::discrete({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(CostModel::discrete({Rational(1)}, {Rational(1), Rational(0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      CostModel::discrete({Rational(1), Rational(1)}, {Rational(1, 2), Rational(1, 2)}),
      std::invalid_argument);  // not strictly increasing
  CHECK_THROWS_AS(
      CostModel::discrete({Rational(-1), Rational(1)}, {Rational(3, 2), Rational(-1, 2)}),
      std::invalid_argument);  // negative probability
  CHECK_THROWS_AS(
      CostModel::discrete({Rational(-1), Rational(1)}, {Rational(1, 2), Rational(1, 3)}),
      std::invalid_argument);  // sums to 5/6
  CHECK_THROWS_AS(CostModel::discrete({Rational(-1)}, {Rational(1)}), std::invalid_argument);
  CHECK_NOTHROW(CostModel::discrete({Rational(-1)}, {Rational(1)}, true));
}

TEST_CASE("lattice is the least common denominator of the values") {
  const CostModel m = CostModel::discrete({Rational(-1, 2), Rational(1, 2), Rational(1)},
                                          {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK(m.lattice_scale() == 2);
  CHECK(m.scaled_values() == std::vector<std::int64_t>{-1, 1, 2});
  CHECK(m.first_positive_type() == 1);

  const CostModel ints = CostModel::discrete({Rational(-2), Rational(3), Rational(4)},
                                             {Rational(3, 5), Rational(3, 10), Rational(1, 10)});
  CHECK(ints.lattice_scale() == 1);
  CHECK(ints.scaled_values() == std::vector<std::int64_t>{-2, 3, 4});

  const CostModel mixed = CostModel::discrete({Rational(-1, 6), Rational(1, 4)},
                                              {Rational(1, 2), Rational(1, 2)});
  CHECK(mixed.lattice_scale() == 12);
  CHECK(mixed.scaled_values() == std::vector<std::int64_t>{-2, 3});
}

TEST_CASE("uniform model bounds") {
  const CostModel u = CostModel::uniform(-0.05, 0.95);
  CHECK(u.kind() == ModelKind::kUniform);
  CHECK(!u.is_discrete());
  CHECK(u.lo() == doctest::Approx(-0.05));
  CHECK(u.hi() == doctest::Approx(0.95));
  CHECK_THROWS_AS(CostModel::uniform(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(CostModel::uniform(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("sample_path is deterministic and lattice-consistent") {
  const CostModel m = CostModel::discrete({Rational(-1, 2), Rational(1, 2), Rational(1)},
                                          {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
  const SamplePath p1 = sample_path(m, 500, rng::Stream{77});
  const SamplePath p2 = sample_path(m, 500, rng::Stream{77});
  const SamplePath p3 = sample_path(m, 500, rng::Stream{78});
  CHECK(p1.costs == p2.costs);
  CHECK(p1.types == p2.types);
  CHECK(p1.costs != p3.costs);
  CHECK(p1.horizon() == 500);
  CHECK(p1.is_discrete());
  CHECK(p1.scale == 2);
  for (int t = 0; t < 500; ++t) {
    const int type = p1.types[static_cast<std::size_t>(t)];
    CHECK(p1.lattice[static_cast<std::size_t>(t)] ==
          m.scaled_values()[static_cast<std::size_t>(type)]);
    CHECK(p1.costs[static_cast<std::size_t>(t)] ==
          doctest::Approx(m.values_real()[static_cast<std::size_t>(type)]));
  }

  // Empirical frequencies approach the probabilities (law of large numbers;
  // 3 sigma on 20k draws).
  const SamplePath big = sample_path(m, 20000, rng::Stream{5});
  int counts[3] = {0, 0, 0};
  for (int type : big.types) ++counts[type];
  CHECK(std::fabs(counts[0] / 20000.0 - 0.5) < 0.011);
  CHECK(std::fabs(counts[1] / 20000.0 - 0.25) < 0.010);
}

TEST_CASE("continuous sample_path stays inside the support") {
  const CostModel u = CostModel::uniform(-0.05, 0.95);
  const SamplePath p = sample_path(u, 2000, rng::Stream{3});
  CHECK(!p.is_discrete());
  CHECK(p.types.empty());
  CHECK(p.lattice.empty());
  double lo = 1e9, hi = -1e9, mean = 0;
  for (double c : p.costs) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    mean += c;
  }
  mean /= 2000;
  CHECK(lo >= -0.05);
  CHECK(hi < 0.95);
  CHECK(std::fabs(mean - 0.45) < 0.02);
}

TEST_CASE("validate_feasibility is exact on the lattice") {
  const CostModel m = CostModel::discrete({Rational(-1), Rational(1)},
                                          {Rational(1, 2), Rational(1, 2)});
  SamplePath path = sample_path(m, 4, rng::Stream{1});
  path.types = {1, 0, 0, 1};
  path.lattice = {1, -1, -1, 1};
  path.costs = {1, -1, -1, 1};

  const FeasibilityVerdict bad = validate_feasibility(path, {1, 1, 1, 1});
  CHECK(!bad.ok);
  CHECK(bad.first_violation == 0);  // prefix +1 immediately
  const FeasibilityVerdict good = validate_feasibility(path, {0, 1, 1, 1});
  CHECK(good.ok);
  CHECK(!good.first_violation.has_value());
  CHECK_THROWS_AS(validate_feasibility(path, {1, 1}), std::invalid_argument);
}

TEST_CASE("validate_feasibility tolerance on continuous paths") {
  SamplePath path;
  path.costs = {-0.3, 0.3 + 1e-12};  // final prefix barely positive, inside tolerance
  CHECK(validate_feasibility(path, {1, 1}).ok);
  path.costs = {-0.1, 0.3};
  const FeasibilityVerdict bad = validate_feasibility(path, {1, 1});
  CHECK(!bad.ok);
  CHECK(bad.first_violation == 1);
}

TEST_CASE("lfdr_trace is the running mean of accepted posteriors") {
  LfdrStream stream;
  stream.alpha = 0.25;
  stream.posteriors = {0.1, 0.4, 0.2};
  const std::vector<double> trace = lfdr_trace(stream, {1, 0, 1});
  REQUIRE(trace.size() == 3);
  CHECK(trace[0] == doctest::Approx(0.1));
  CHECK(trace[1] == doctest::Approx(0.1));   // reject leaves the ratio alone
  CHECK(trace[2] == doctest::Approx(0.15));  // (0.1 + 0.2) / 2
  const std::vector<double> none = lfdr_trace(stream, {0, 0, 0});
  CHECK(none == std::vector<double>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(lfdr_trace(stream, {1}), std::invalid_argument);
}

TEST_CASE("cost_from_posterior shifts by alpha and validates the range") {
  LfdrStream stream;
  stream.alpha = 0.25;
  stream.posteriors = {0.1, 0.4, 1.0, 0.0};
  const SamplePath path = cost_from_posterior(stream);
  REQUIRE(path.horizon() == 4);
  CHECK(path.costs[0] == doctest::Approx(-0.15));
  CHECK(path.costs[1] == doctest::Approx(0.15));
  CHECK(path.costs[2] == doctest::Approx(0.75));
  CHECK(path.costs[3] == doctest::Approx(-0.25));
  CHECK(!path.is_discrete());

  LfdrStream bad;
  bad.alpha = 0.25;
  bad.posteriors = {1.5};
  CHECK_THROWS_AS(cost_from_posterior(bad), std::invalid_argument);
  bad.posteriors = {-0.1};
  CHECK_THROWS_AS(cost_from_posterior(bad), std::invalid_argument);
}
