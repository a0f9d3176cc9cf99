#include "lfdr/commands.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "lfdr/config.hpp"
#include "lfdr/oracles.hpp"
#include "lfdr/report.hpp"
#include "lfdr/rng.hpp"
#include "lfdr/sim.hpp"

namespace lfdr {

namespace {

constexpr std::uint64_t kValidateSalt = 3;

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

void print_lattice_instance(std::ostream& err, const std::vector<std::int64_t>& costs) {
  err << "costs:";
  for (const std::int64_t c : costs) err << ' ' << c;
  err << '\n';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  NamedConfig named;
  try {
    named = load_config(options.config_path);
  } catch (const ConfigError& error) {
    err << error.what() << '\n';
    return error.semantic() ? 3 : 2;
  }
  if (options.seed_override) named.experiment.seed = *options.seed_override;
  if (options.threads_override) named.experiment.threads = *options.threads_override;

  ExperimentResult result;
  try {
    result = run_experiment(named.experiment);
  } catch (const std::exception& error) {
    err << "run: " << error.what() << '\n';
    return 3;
  }

  const bool csv_to_stdout = options.csv_path.empty();
  if (csv_to_stdout) {
    write_csv(out, result);
  } else {
    std::ofstream file(options.csv_path, std::ios::binary);
    if (!file) {
      err << "run: cannot write " << options.csv_path << '\n';
      return 3;
    }
    write_csv(file, result);
    out << "wrote " << options.csv_path << '\n';
  }
  if (!options.svg_path.empty()) {
    std::ofstream file(options.svg_path, std::ios::binary);
    if (!file) {
      err << "run: cannot write " << options.svg_path << '\n';
      return 3;
    }
    write_svg(file, result, named.name.empty() ? "mean regret vs horizon" : named.name);
    out << "wrote " << options.svg_path << '\n';
  }
  if (named.experiment.diagnostics) {
    // Keep stdout machine-readable when it carries the CSV itself.
    std::ostream& sink = csv_to_stdout ? err : out;
    for (const DiagnosticsRow& row : result.diagnostics)
      sink << "diagnostics " << row.policy << " T=" << row.horizon
           << " wrong_accepts=" << format_double(row.mean_wrong_accepts)
           << " wrong_rejects=" << format_double(row.mean_wrong_rejects) << '\n';
  }
  return 0;
}

int cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err) {
  if (options.max_horizon > 20) {
    err << "validate: max horizon for exhaustive enumeration is 20\n";
    return 2;
  }
  if (options.max_horizon < 1 || options.instances < 1) {
    err << "validate: instances and max horizon must be positive\n";
    return 2;
  }

  // Random mixed-sign lattice instances: alphabet of at most 4 integer costs
  // drawn from [-5, 9], horizons up to max_horizon, zero initial budget.
  int oracle_checked = 0;
  for (int instance = 0; instance < options.instances; ++instance) {
    rng::Stream stream{rng::stream_key(options.seed, static_cast<std::uint64_t>(instance),
                                       kValidateSalt)};
    std::uint64_t counter = 1;
    const auto next_int = [&](int lo, int hi) {
      return lo + static_cast<int>(stream.uniform_at(counter++) * (hi - lo + 1));
    };
    const int horizon = next_int(1, options.max_horizon);
    const int alphabet = next_int(1, 4);
    std::vector<std::int64_t> letters(alphabet);
    for (auto& letter : letters) letter = next_int(-5, 9);
    std::vector<std::int64_t> costs(horizon);
    for (auto& cost : costs) cost = letters[next_int(0, alphabet - 1)];

    const OracleResult fast = ho_any_span(costs, 0);
    OracleResult brute = ho_any_brute_force_span(costs, 0);
    if (options.inject_fault && instance == 0) brute.count += 1;

    std::int64_t prefix = 0;
    bool trace_ok = fast.trace.size() == costs.size();
    int trace_count = 0;
    for (std::size_t t = 0; trace_ok && t < costs.size(); ++t) {
      if (!fast.trace[t]) continue;
      prefix += costs[t];
      ++trace_count;
      if (prefix > 0) trace_ok = false;
    }
    if (trace_ok) trace_ok = trace_count == fast.count;
    if (fast.count != brute.count || !trace_ok) {
      err << "validate: hindsight oracle mismatch on instance " << instance << '\n';
      print_lattice_instance(err, costs);
      err << "greedy-with-eviction: " << fast.count << (trace_ok ? "" : " (infeasible trace)")
          << ", exhaustive: " << brute.count << '\n';
      return 1;
    }
    ++oracle_checked;
  }
  out << "ho_any: " << oracle_checked << '/' << options.instances << " exact\n";

  // Reflected-walk identities on random +/-1 paths: the gap between the
  // final-constraint and every-prefix oracles equals min(final distance,
  // blocked steps), and blocked - distance equals (#up - #down).
  const int walk_instances = options.instances;
  int walk_checked = 0;
  for (int instance = 0; instance < walk_instances; ++instance) {
    rng::Stream stream{rng::stream_key(options.seed, static_cast<std::uint64_t>(instance),
                                       kValidateSalt + 1)};
    std::uint64_t counter = 1;
    const int horizon =
        1 + static_cast<int>(stream.uniform_at(counter++) * options.max_horizon);
    std::vector<std::int64_t> costs(horizon);
    std::vector<int> steps(horizon);
    int ups = 0;
    for (int t = 0; t < horizon; ++t) {
      const bool up = stream.uniform_at(counter++) < 0.5;
      steps[t] = up ? 1 : -1;
      costs[t] = steps[t];
      ups += up ? 1 : 0;
    }
    const OracleResult fix = ho_fix_span(std::span<const std::int64_t>(costs), std::int64_t{0});
    const OracleResult any = ho_any_span(std::span<const std::int64_t>(costs), std::int64_t{0});
    const ReflectedWalkStats walk = reflected_walk_stats(std::span<const int>(steps));
    const int downs = horizon - ups;
    const bool gap_ok =
        fix.count - any.count == std::min(walk.final_distance, walk.blocked_steps);
    const bool drift_ok = walk.blocked_steps - walk.final_distance == ups - downs;
    if (!gap_ok || !drift_ok) {
      err << "validate: reflected-walk identity mismatch on instance " << instance << '\n';
      print_lattice_instance(err, costs);
      err << "ho_fix=" << fix.count << " ho_any=" << any.count
          << " distance=" << walk.final_distance << " blocked=" << walk.blocked_steps << '\n';
      return 1;
    }
    ++walk_checked;
  }
  out << "walk identities: " << walk_checked << '/' << walk_instances << " exact\n";
  return 0;
}

int cmd_slope(const SlopeOptions& options, std::ostream& out, std::ostream& err) {
  std::ifstream file(options.csv_path, std::ios::binary);
  if (!file) {
    err << "slope: cannot open " << options.csv_path << '\n';
    return 2;
  }
  std::string line;
  if (!std::getline(file, line)) {
    err << "slope: empty CSV\n";
    return 2;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "policy,T,benchmark,mean_regret,stderr,mean_reward,replications,seed") {
    err << "slope: unexpected CSV header\n";
    return 2;
  }

  std::vector<std::pair<double, double>> series;
  bool saw_series = false;
  std::size_t line_number = 1;
  while (std::getline(file, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 8) {
      err << "slope: malformed CSV line " << line_number << '\n';
      return 2;
    }
    if (fields[0] != options.policy || fields[2] != options.benchmark) continue;
    saw_series = true;
    double horizon = 0.0, regret = 0.0;
    try {
      horizon = std::stod(fields[1]);
      regret = std::stod(fields[3]);
    } catch (const std::exception&) {
      err << "slope: malformed CSV line " << line_number << '\n';
      return 2;
    }
    if (regret <= 0.0) {
      err << "slope: excluding T=" << fields[1] << " (mean_regret=" << fields[3]
          << " has no log)\n";
      continue;
    }
    series.emplace_back(horizon, regret);
  }
  if (!saw_series) {
    err << "slope: no rows for policy=" << options.policy << " benchmark=" << options.benchmark
        << '\n';
    return 1;
  }
  if (series.size() < 2) {
    err << "slope: need at least two usable points, have " << series.size() << '\n';
    return 1;
  }
  SlopeFit fit;
  try {
    fit = loglog_slope(series);
  } catch (const std::exception& error) {
    err << "slope: " << error.what() << '\n';
    return 1;
  }
  out << "slope " << format_double(fit.slope) << " +/- " << format_double(fit.stderr_slope)
      << '\n';
  return 0;
}

}  // namespace lfdr
