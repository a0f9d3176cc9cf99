#pragma once

#include <optional>
#include <vector>

#include "lfdr/cost_model.hpp"
#include "lfdr/rational.hpp"

namespace lfdr {

// Solution of the per-period fluid relaxation
//   max E[x(a)]  s.t.  E[a x(a)] <= b,  0 <= x <= 1,
// which is a fractional knapsack: accept costs below a threshold fully, the
// threshold cost partially. Discrete solutions are exact rationals.
struct FluidSolution {
  ModelKind kind = ModelKind::kDiscrete;

  // Discrete: per-type acceptance probabilities in {1, x*, 0} (ascending cost
  // order), boundary_type indexes the threshold cost, boundary_fraction is x*.
  // All-accept solutions report the top type with fraction 1.
  std::vector<Rational> accept_rate;
  int boundary_type = -1;
  Rational boundary_fraction{1};
  Rational value_rate_exact{0};

  // Continuous: accept below `threshold`.
  double threshold = 0.0;

  double value_rate = 0.0;     // expected acceptances per period
  double boundary_cost = 0.0;  // threshold cost as a real number
  bool all_accept = false;
};

// Prefix expectations of p*a in ascending cost order, with all non-positive
// types collapsed into index 0: deltas[0] = sum over a <= 0 of p*a, and
// deltas[r] adds the r-th positive type. i0 = max{r : deltas[r] < 0} (strict;
// absent when even deltas[0] >= 0). boundary_rank = i0 + 1 when that rank
// exists, i.e. unless every prefix is negative (degenerate all-accept).
struct DeltaProfile {
  std::vector<Rational> deltas;
  std::optional<int> i0;
  std::optional<int> boundary_rank;
  int first_positive_type = 0;  // type index of rank 1
  int positive_count = 0;

  // Type index of a positive rank (1-based rank).
  int type_of_rank(int rank) const { return first_positive_type + rank - 1; }
  // Positive rank of a type index; 0 for non-positive types.
  int rank_of_type(int type) const {
    return type < first_positive_type ? 0 : type - first_positive_type + 1;
  }
};

// Central moments of the accepted cost A = a * x(a) under the fluid solution
// at budget rate 0 (boundary arrivals thinned by x*). kappa = (rho/sigma)^6 is
// undefined when sigma == 0.
struct Moments {
  double sigma = 0.0;  // sqrt(E[(A - EA)^2])
  double rho = 0.0;    // cbrt(E[|A - EA|^3])
  std::optional<double> kappa;
};

// budget_rate must be >= 0. Continuous models evaluate it in double precision.
FluidSolution solve_fluid(const CostModel& model, const Rational& budget_rate);

// Continuous models only: real-valued budget rate.
FluidSolution solve_fluid_rate(const CostModel& model, double budget_rate);

// Discrete models only.
DeltaProfile delta_profile(const CostModel& model);

// Discrete closed form; continuous adaptive quadrature (abs error <= 1e-10).
Moments accepted_cost_moments(const CostModel& model, const FluidSolution& solution);

}  // namespace lfdr
