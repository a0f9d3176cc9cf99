#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lfdr/rational.hpp"
#include "lfdr/rng.hpp"

namespace lfdr {

enum class ModelKind { kDiscrete, kUniform };

// Arrival-cost distribution. Discrete models keep exact rational values and
// probabilities; values are additionally normalized to integers over their
// least common denominator (the lattice), so prefix-sum feasibility can be
// decided in int64 with no rounding. Uniform models are continuous on
// [lo, hi].
class CostModel {
 public:
  // Values strictly increasing; probabilities nonnegative, summing to exactly
  // 1 (a caller-side drift of up to 1e-12 may be snapped beforehand, see
  // config parsing). At least one value must be positive unless
  // allow_all_nonpositive is set (used by trivial all-accept tests).
  static CostModel discrete(std::vector<Rational> values, std::vector<Rational> probs,
                            bool allow_all_nonpositive = false);
  static CostModel uniform(double lo, double hi);

  ModelKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == ModelKind::kDiscrete; }

  // Discrete accessors.
  int num_types() const { return static_cast<int>(values_.size()); }
  const std::vector<Rational>& values() const { return values_; }
  const std::vector<Rational>& probs() const { return probs_; }
  std::int64_t lattice_scale() const { return scale_; }
  const std::vector<std::int64_t>& scaled_values() const { return scaled_; }
  const std::vector<double>& values_real() const { return values_real_; }
  const std::vector<double>& probs_real() const { return probs_real_; }
  // Index of the first type with value > 0; num_types() when none exists.
  int first_positive_type() const { return first_positive_; }

  // Uniform accessors.
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  CostModel() = default;
  ModelKind kind_ = ModelKind::kDiscrete;
  std::vector<Rational> values_;
  std::vector<Rational> probs_;
  std::vector<std::int64_t> scaled_;
  std::vector<double> values_real_;
  std::vector<double> probs_real_;
  std::int64_t scale_ = 1;
  int first_positive_ = 0;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

// One realized arrival sequence. Discrete paths carry the type index and the
// exact lattice cost of every entry next to the real-valued costs; continuous
// paths carry only the real costs (scale == 0 marks continuous).
struct SamplePath {
  std::vector<double> costs;
  std::vector<int> types;             // discrete only
  std::vector<std::int64_t> lattice;  // discrete only, cost * scale
  std::int64_t scale = 0;
  std::uint64_t seed = 0;

  int horizon() const { return static_cast<int>(costs.size()); }
  bool is_discrete() const { return scale > 0; }
};

using DecisionTrace = std::vector<std::uint8_t>;  // 1 = accepted

struct RunResult {
  DecisionTrace trace;
  std::vector<double> budget;  // budget[t] = B^(t+1), budget after t decisions; budget[0] = 0
  int reward = 0;
  std::optional<std::vector<double>> lfdr;
};

struct FeasibilityVerdict {
  bool ok = true;
  std::optional<std::size_t> first_violation;  // 0-based index into the trace
};

// Posterior-probability stream: alpha is the target level, posteriors[t] the
// null posterior of arrival t (in [0, 1]).
struct LfdrStream {
  double alpha = 0.0;
  std::vector<double> posteriors;
};

// Draws `horizon` arrivals from `model` using the given counter-based stream
// (entry t consumes draw t, 1-based).
SamplePath sample_path(const CostModel& model, int horizon, rng::Stream stream);

// Checks every prefix sum of accepted costs stays <= 0: exact on the lattice
// for discrete paths, tolerance 1e-9 for continuous ones. Throws if the trace
// length does not match the path.
FeasibilityVerdict validate_feasibility(const SamplePath& path, const DecisionTrace& trace);

// Running ratio (sum of accepted posteriors) / (number accepted); 0 before the
// first acceptance.
std::vector<double> lfdr_trace(const LfdrStream& stream, const DecisionTrace& trace);

// Maps posteriors w to costs w - alpha (continuous path, seed 0).
SamplePath cost_from_posterior(const LfdrStream& stream);

}  // namespace lfdr
