#include "lfdr/cost_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lfdr {

namespace {

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  const __int128 l = static_cast<__int128>(a / g) * b;
  if (l > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("CostModel: value denominators overflow the lattice");
  return static_cast<std::int64_t>(l);
}

}  // namespace

CostModel CostModel::discrete(std::vector<Rational> values, std::vector<Rational> probs,
                              bool allow_all_nonpositive) {
  if (values.empty()) throw std::invalid_argument("CostModel: empty value set");
  if (values.size() != probs.size())
    throw std::invalid_argument("CostModel: values and probs must have equal length");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i - 1] < values[i]))
      throw std::invalid_argument("CostModel: values must be strictly increasing");
  Rational sum(0);
  for (const auto& p : probs) {
    if (p.is_negative()) throw std::invalid_argument("CostModel: negative probability");
    sum += p;
  }
  if (sum != Rational(1)) throw std::invalid_argument("CostModel: probabilities must sum to 1");

  CostModel m;
  m.kind_ = ModelKind::kDiscrete;
  m.values_ = std::move(values);
  m.probs_ = std::move(probs);

  std::int64_t scale = 1;
  for (const auto& v : m.values_) scale = lcm_checked(scale, v.den());
  m.scale_ = scale;
  m.scaled_.reserve(m.values_.size());
  m.values_real_.reserve(m.values_.size());
  m.probs_real_.reserve(m.values_.size());
  for (std::size_t i = 0; i < m.values_.size(); ++i) {
    const __int128 s = static_cast<__int128>(m.values_[i].num()) * (scale / m.values_[i].den());
    if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min())
      throw std::overflow_error("CostModel: scaled value overflows int64");
    m.scaled_.push_back(static_cast<std::int64_t>(s));
    m.values_real_.push_back(m.values_[i].to_double());
    m.probs_real_.push_back(m.probs_[i].to_double());
  }

  int first_positive = static_cast<int>(m.values_.size());
  for (std::size_t i = 0; i < m.values_.size(); ++i) {
    if (m.values_[i].is_positive()) {
      first_positive = static_cast<int>(i);
      break;
    }
  }
  m.first_positive_ = first_positive;
  if (first_positive == m.num_types() && !allow_all_nonpositive)
    throw std::invalid_argument("CostModel: no positive value (pass allow_all_nonpositive for trivial models)");
  return m;
}

CostModel CostModel::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("CostModel: uniform needs lo < hi");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("CostModel: uniform bounds must be finite");
  CostModel m;
  m.kind_ = ModelKind::kUniform;
  m.scale_ = 0;
  m.lo_ = lo;
  m.hi_ = hi;
  return m;
}

SamplePath sample_path(const CostModel& model, int horizon, rng::Stream stream) {
  if (horizon < 0) throw std::invalid_argument("sample_path: negative horizon");
  SamplePath path;
  path.seed = stream.key;
  path.costs.reserve(horizon);
  if (model.kind() == ModelKind::kDiscrete) {
    path.scale = model.lattice_scale();
    path.types.reserve(horizon);
    path.lattice.reserve(horizon);
    const auto& probs = model.probs_real();
    std::vector<double> cum(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      cum[i] = acc;
    }
    cum.back() = 1.0;
    for (int t = 1; t <= horizon; ++t) {
      const double u = stream.uniform_at(static_cast<std::uint64_t>(t));
      int type = 0;
      while (u >= cum[type]) ++type;
      path.types.push_back(type);
      path.lattice.push_back(model.scaled_values()[type]);
      path.costs.push_back(model.values_real()[type]);
    }
  } else {
    const double lo = model.lo(), hi = model.hi();
    for (int t = 1; t <= horizon; ++t) {
      const double u = stream.uniform_at(static_cast<std::uint64_t>(t));
      path.costs.push_back(lo + u * (hi - lo));
    }
  }
  return path;
}

FeasibilityVerdict validate_feasibility(const SamplePath& path, const DecisionTrace& trace) {
  if (trace.size() != path.costs.size())
    throw std::invalid_argument("validate_feasibility: trace length mismatch");
  FeasibilityVerdict verdict;
  if (path.is_discrete()) {
    std::int64_t prefix = 0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
      if (trace[t]) prefix += path.lattice[t];
      if (prefix > 0) {
        verdict.ok = false;
        verdict.first_violation = t;
        return verdict;
      }
    }
  } else {
    double prefix = 0.0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
      if (trace[t]) prefix += path.costs[t];
      if (prefix > 1e-9) {
        verdict.ok = false;
        verdict.first_violation = t;
        return verdict;
      }
    }
  }
  return verdict;
}

std::vector<double> lfdr_trace(const LfdrStream& stream, const DecisionTrace& trace) {
  if (trace.size() != stream.posteriors.size())
    throw std::invalid_argument("lfdr_trace: trace length mismatch");
  std::vector<double> out(trace.size(), 0.0);
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    if (trace[t]) {
      sum += stream.posteriors[t];
      ++count;
    }
    out[t] = count == 0 ? 0.0 : sum / static_cast<double>(count);
  }
  return out;
}

SamplePath cost_from_posterior(const LfdrStream& stream) {
  SamplePath path;
  path.scale = 0;
  path.seed = 0;
  path.costs.reserve(stream.posteriors.size());
  for (const double w : stream.posteriors) {
    if (w < 0.0 || w > 1.0)
      throw std::invalid_argument("cost_from_posterior: posterior outside [0, 1]");
    path.costs.push_back(w - stream.alpha);
  }
  return path;
}

}  // namespace lfdr
