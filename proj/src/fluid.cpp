#include "lfdr/fluid.hpp"

#include <cmath>
#include <stdexcept>

namespace lfdr {

namespace {

FluidSolution solve_fluid_discrete(const CostModel& model, const Rational& b) {
  const int n = model.num_types();
  FluidSolution sol;
  sol.kind = ModelKind::kDiscrete;
  sol.accept_rate.assign(n, Rational(0));

  // Accept types in ascending cost order while the running expected accepted
  // cost stays within b; the first type that cannot be taken fully is the
  // boundary and gets the leftover fraction.
  Rational spent(0);
  int boundary = -1;
  Rational fraction(1);
  for (int i = 0; i < n; ++i) {
    const Rational contribution = model.probs()[i] * model.values()[i];
    if (spent + contribution <= b) {
      sol.accept_rate[i] = Rational(1);
      spent += contribution;
      continue;
    }
    // contribution > 0 here: non-positive contributions always fit.
    boundary = i;
    fraction = (b - spent) / contribution;
    if (fraction.is_negative()) fraction = Rational(0);  // unreachable for b >= 0
    sol.accept_rate[i] = fraction;
    break;
  }
  if (boundary < 0) {
    sol.all_accept = true;
    sol.boundary_type = n - 1;
    sol.boundary_fraction = Rational(1);
  } else {
    sol.boundary_type = boundary;
    sol.boundary_fraction = fraction;
  }

  Rational rate(0);
  for (int i = 0; i < n; ++i) rate += model.probs()[i] * sol.accept_rate[i];
  sol.value_rate_exact = rate;
  sol.value_rate = rate.to_double();
  sol.boundary_cost = model.values_real()[sol.boundary_type];
  return sol;
}

FluidSolution solve_fluid_uniform(const CostModel& model, double b) {
  const double lo = model.lo(), hi = model.hi();
  const double width = hi - lo;
  FluidSolution sol;
  sol.kind = ModelKind::kUniform;
  const double mean = 0.5 * (lo + hi);
  if (mean <= b) {
    sol.all_accept = true;
    sol.threshold = hi;
    sol.value_rate = 1.0;
  } else {
    // E[a 1{a <= s}] = (s^2 - lo^2) / (2 width) = b  =>  s = sqrt(lo^2 + 2 b width).
    const double s = std::sqrt(std::max(0.0, lo * lo + 2.0 * b * width));
    sol.threshold = std::min(hi, std::max(s, lo));
    sol.value_rate = (sol.threshold - lo) / width;
  }
  sol.boundary_cost = sol.threshold;
  sol.boundary_fraction = Rational(1);
  return sol;
}

// Adaptive Simpson on [a, b], absolute tolerance tol.
inline double simpson_estimate(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_estimate(a, m, fa, flm, fm);
  const double right = simpson_estimate(m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  if (a >= b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson_estimate(a, b, fa, fm, fb), tol, 48);
}

// Integrates f over [a, b] split at interior kink points.
template <typename F>
double integrate_piecewise(const F& f, double a, double b, std::initializer_list<double> kinks,
                           double tol) {
  double total = 0.0;
  double start = a;
  for (double k : kinks) {
    if (k > start && k < b) {
      total += integrate(f, start, k, tol);
      start = k;
    }
  }
  total += integrate(f, start, b, tol);
  return total;
}

}  // namespace

FluidSolution solve_fluid(const CostModel& model, const Rational& budget_rate) {
  if (budget_rate.is_negative()) throw std::invalid_argument("solve_fluid: negative budget rate");
  if (model.kind() == ModelKind::kDiscrete) return solve_fluid_discrete(model, budget_rate);
  return solve_fluid_uniform(model, budget_rate.to_double());
}

FluidSolution solve_fluid_rate(const CostModel& model, double budget_rate) {
  if (model.kind() == ModelKind::kDiscrete)
    throw std::invalid_argument("solve_fluid_rate: continuous models only");
  if (budget_rate < 0.0) throw std::invalid_argument("solve_fluid_rate: negative budget rate");
  return solve_fluid_uniform(model, budget_rate);
}

DeltaProfile delta_profile(const CostModel& model) {
  if (model.kind() != ModelKind::kDiscrete)
    throw std::invalid_argument("delta_profile: discrete models only");
  const int n = model.num_types();
  const int first_pos = model.first_positive_type();

  DeltaProfile profile;
  profile.first_positive_type = first_pos;
  profile.positive_count = n - first_pos;
  profile.deltas.reserve(profile.positive_count + 1);

  Rational acc(0);
  for (int i = 0; i < first_pos; ++i) acc += model.probs()[i] * model.values()[i];
  profile.deltas.push_back(acc);
  for (int i = first_pos; i < n; ++i) {
    acc += model.probs()[i] * model.values()[i];
    profile.deltas.push_back(acc);
  }

  for (int r = profile.positive_count; r >= 0; --r) {
    if (profile.deltas[r].is_negative()) {
      profile.i0 = r;
      break;
    }
  }
  if (profile.i0 && *profile.i0 < profile.positive_count) profile.boundary_rank = *profile.i0 + 1;
  return profile;
}

Moments accepted_cost_moments(const CostModel& model, const FluidSolution& solution) {
  Moments m;
  double variance = 0.0;
  double third = 0.0;
  if (model.kind() == ModelKind::kDiscrete) {
    // Law of A: each type contributes mass p*x at its value and p*(1-x) at 0.
    double mean = 0.0;
    for (int i = 0; i < model.num_types(); ++i)
      mean += model.probs_real()[i] * solution.accept_rate[i].to_double() * model.values_real()[i];
    for (int i = 0; i < model.num_types(); ++i) {
      const double p = model.probs_real()[i];
      const double x = solution.accept_rate[i].to_double();
      const double v = model.values_real()[i];
      const double dev = v - mean;
      variance += p * x * dev * dev;
      third += p * x * std::fabs(dev) * std::fabs(dev) * std::fabs(dev);
      const double zdev = 0.0 - mean;
      variance += p * (1.0 - x) * zdev * zdev;
      third += p * (1.0 - x) * std::fabs(zdev) * std::fabs(zdev) * std::fabs(zdev);
    }
  } else {
    const double lo = model.lo(), hi = model.hi();
    const double width = hi - lo;
    const double s = solution.threshold;
    const double density = 1.0 / width;
    const double atom = (hi - s) / width;  // rejected mass collapses onto A = 0
    const double mean =
        integrate_piecewise([&](double a) { return a * density; }, lo, s, {0.0}, 1e-13);
    const double tol = 1e-12;
    variance = integrate_piecewise(
                   [&](double a) {
                     const double d = a - mean;
                     return d * d * density;
                   },
                   lo, s, {mean}, tol) +
               atom * mean * mean;
    third = integrate_piecewise(
                [&](double a) {
                  const double d = std::fabs(a - mean);
                  return d * d * d * density;
                },
                lo, s, {mean}, tol) +
            atom * std::fabs(mean) * std::fabs(mean) * std::fabs(mean);
  }
  m.sigma = std::sqrt(std::max(0.0, variance));
  m.rho = std::cbrt(std::max(0.0, third));
  if (m.sigma > 0.0) {
    const double ratio = m.rho / m.sigma;
    m.kappa = ratio * ratio * ratio * ratio * ratio * ratio;
  }
  return m;
}

}  // namespace lfdr
