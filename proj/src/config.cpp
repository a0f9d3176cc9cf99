#include "lfdr/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lfdr {

namespace {

using nlohmann::json;

void require_keys(const json& object, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("config: unknown key \"" + key + "\" in " + where);
  }
}

const json& require(const json& object, const std::string& where, const std::string& key) {
  if (!object.contains(key))
    throw ConfigError("config: missing key \"" + key + "\" in " + where);
  return object.at(key);
}

Rational rational_from(const json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_number_float()) {
    const auto r = Rational::from_double(value.get<double>());
    if (!r)
      throw ConfigError("config: " + where +
                        " is not representable as a small rational; write it as \"p/q\"");
    return *r;
  }
  if (value.is_string()) {
    const auto r = Rational::parse(value.get<std::string>());
    if (!r) throw ConfigError("config: cannot parse rational \"" + value.get<std::string>() +
                              "\" in " + where);
    return *r;
  }
  throw ConfigError("config: " + where + " must be a number or a \"p/q\" string");
}

std::vector<Rational> rational_list(const json& value, const std::string& where) {
  if (!value.is_array() || value.empty())
    throw ConfigError("config: " + where + " must be a non-empty array");
  std::vector<Rational> out;
  out.reserve(value.size());
  std::size_t index = 0;
  for (const auto& entry : value) {
    out.push_back(rational_from(entry, where + "[" + std::to_string(index) + "]"));
    ++index;
  }
  return out;
}

ModelSource parse_model(const json& value) {
  if (!value.is_object()) throw ConfigError("config: model must be an object");
  const std::string kind = require(value, "model", "kind").get<std::string>();
  if (kind == "discrete") {
    require_keys(value, "model", {"kind", "values", "probs"});
    std::vector<Rational> values = rational_list(require(value, "model", "values"), "model.values");
    std::vector<Rational> probs = rational_list(require(value, "model", "probs"), "model.probs");
    if (values.size() != probs.size())
      throw ConfigError("config: model.values and model.probs must have equal length");
    // Snap tiny rationalization drift; anything larger is a config error.
    Rational sum(0);
    for (const auto& p : probs) sum += p;
    if (sum != Rational(1)) {
      const double drift = std::fabs(sum.to_double() - 1.0);
      if (drift > 1e-12) throw ConfigError("config: model.probs must sum to 1");
      probs.back() += Rational(1) - sum;
      if (probs.back().is_negative())
        throw ConfigError("config: model.probs must sum to 1");
    }
    try {
      return CostModel::discrete(std::move(values), std::move(probs));
    } catch (const std::exception& error) {
      throw ConfigError(std::string("config: ") + error.what());
    }
  }
  if (kind == "uniform") {
    require_keys(value, "model", {"kind", "lo", "hi"});
    const double lo = require(value, "model", "lo").get<double>();
    const double hi = require(value, "model", "hi").get<double>();
    try {
      return CostModel::uniform(lo, hi);
    } catch (const std::exception& error) {
      throw ConfigError(std::string("config: ") + error.what());
    }
  }
  if (kind == "sqrtT_lower_bound") {
    require_keys(value, "model", {"kind"});
    return SqrtHorizonFamily{};
  }
  throw ConfigError("config: unknown model kind \"" + kind + "\"");
}

PolicySpec parse_policy(const json& value, std::size_t index) {
  const std::string where = "policies[" + std::to_string(index) + "]";
  if (!value.is_object()) throw ConfigError("config: " + where + " must be an object");
  require_keys(value, where, {"name", "beta", "trunc_exponent"});
  const std::string name = require(value, where, "name").get<std::string>();
  const auto kind = policy_kind_from_name(name);
  if (!kind) throw ConfigError("config: unknown policy \"" + name + "\" in " + where);
  PolicySpec spec;
  spec.kind = *kind;
  if (value.contains("beta")) {
    if (spec.kind != PolicyKind::kIfr)
      throw ConfigError("config: beta only applies to ifr (" + where + ")");
    spec.resolve.beta = value.at("beta").get<double>();
    if (!(spec.resolve.beta > 0.0 && spec.resolve.beta < 1.0))
      throw ConfigError("config: beta must lie in (0, 1) (" + where + ")");
  }
  if (value.contains("trunc_exponent")) {
    if (spec.kind != PolicyKind::kIfr && spec.kind != PolicyKind::kFrt)
      throw ConfigError("config: trunc_exponent only applies to ifr/frt (" + where + ")");
    spec.resolve.trunc_exponent = value.at("trunc_exponent").get<double>();
    if (spec.resolve.trunc_exponent <= 0.0)
      throw ConfigError("config: trunc_exponent must be positive (" + where + ")");
  }
  return spec;
}

}  // namespace

NamedConfig parse_config_text(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("config: ") + error.what());
  }
  if (!document.is_object()) throw ConfigError("config: top level must be an object");
  require_keys(document, "config",
               {"schema_version", "name", "model", "horizons", "replications", "seed", "policies",
                "benchmarks", "diagnostics", "threads"});
  const json& version = require(document, "config", "schema_version");
  if (!version.is_number_integer() || version.get<int>() != 1)
    throw ConfigError("config: schema_version must be 1");

  NamedConfig named;
  if (document.contains("name")) named.name = document.at("name").get<std::string>();
  ExperimentConfig& config = named.experiment;
  config.model = parse_model(require(document, "config", "model"));

  const json& horizons = require(document, "config", "horizons");
  if (!horizons.is_array() || horizons.empty())
    throw ConfigError("config: horizons must be a non-empty array");
  int previous = 0;
  for (const auto& entry : horizons) {
    if (!entry.is_number_integer() || entry.get<int>() < 1)
      throw ConfigError("config: horizons must be positive integers");
    const int horizon = entry.get<int>();
    if (horizon <= previous) throw ConfigError("config: horizons must be strictly increasing");
    previous = horizon;
    config.horizons.push_back(horizon);
  }

  const json& replications = require(document, "config", "replications");
  if (!replications.is_number_integer() || replications.get<int>() < 1)
    throw ConfigError("config: replications must be a positive integer");
  config.replications = replications.get<int>();

  const json& seed = require(document, "config", "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer())
    throw ConfigError("config: seed must be a nonnegative integer");
  if (seed.is_number_integer() && seed.get<std::int64_t>() < 0)
    throw ConfigError("config: seed must be a nonnegative integer");
  config.seed = seed.get<std::uint64_t>();

  const json& policies = require(document, "config", "policies");
  if (!policies.is_array() || policies.empty())
    throw ConfigError("config: policies must be a non-empty array");
  for (std::size_t i = 0; i < policies.size(); ++i)
    config.policies.push_back(parse_policy(policies[i], i));

  const json& benchmarks = require(document, "config", "benchmarks");
  if (!benchmarks.is_array() || benchmarks.empty())
    throw ConfigError("config: benchmarks must be a non-empty array");
  for (const auto& entry : benchmarks) {
    if (!entry.is_string()) throw ConfigError("config: benchmarks must be strings");
    const auto benchmark = benchmark_from_name(entry.get<std::string>());
    if (!benchmark)
      throw ConfigError("config: unknown benchmark \"" + entry.get<std::string>() + "\"");
    config.benchmarks.push_back(*benchmark);
  }

  if (document.contains("diagnostics")) {
    if (!document.at("diagnostics").is_boolean())
      throw ConfigError("config: diagnostics must be a boolean");
    config.diagnostics = document.at("diagnostics").get<bool>();
  }
  if (document.contains("threads")) {
    if (!document.at("threads").is_number_integer() || document.at("threads").get<int>() < 0)
      throw ConfigError("config: threads must be a nonnegative integer");
    config.threads = document.at("threads").get<int>();
  }

  // Semantic cross-checks: structurally valid configs that cannot run.
  const bool continuous = std::holds_alternative<CostModel>(config.model) &&
                          !std::get<CostModel>(config.model).is_discrete();
  const bool wants_dp =
      std::any_of(config.benchmarks.begin(), config.benchmarks.end(),
                  [](Benchmark b) { return b == Benchmark::kDp; }) ||
      std::any_of(config.policies.begin(), config.policies.end(), [](const PolicySpec& spec) {
        return spec.kind == PolicyKind::kDp || spec.kind == PolicyKind::kDpExact;
      });
  if (continuous && wants_dp)
    throw ConfigError("config: dp needs a discrete model", /*semantic_error=*/true);
  const bool wants_lb = std::any_of(config.policies.begin(), config.policies.end(),
                                    [](const PolicySpec& spec) { return spec.kind == PolicyKind::kLb; });
  if (continuous && wants_lb)
    throw ConfigError("config: lb needs a discrete model", /*semantic_error=*/true);
  if (std::holds_alternative<SqrtHorizonFamily>(config.model)) {
    for (const int horizon : config.horizons)
      if (horizon < 16)
        throw ConfigError("config: sqrtT_lower_bound needs horizons >= 16",
                          /*semantic_error=*/true);
  }
  return named;
}

NamedConfig load_config(const std::string& path) {
  std::ifstream input(path, std::ios::binary);
  if (!input) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace lfdr
