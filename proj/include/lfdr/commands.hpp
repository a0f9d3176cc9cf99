#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace lfdr {

struct RunOptions {
  std::string config_path;
  std::string csv_path;  // empty: CSV goes to stdout
  std::string svg_path;  // empty: no chart
  std::optional<std::uint64_t> seed_override;
  std::optional<int> threads_override;
};

// Loads the config, runs the experiment, writes CSV (and optionally an SVG
// chart). Exit codes: 0 ok, 2 schema error, 3 semantic or runtime error.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct ValidateOptions {
  int instances = 10000;
  int max_horizon = 12;
  std::uint64_t seed = 7;
  // Test hook (not exposed on the CLI): corrupts one comparison so the
  // mismatch path is exercised end to end.
  bool inject_fault = false;
};

// Cross-checks the greedy-with-eviction hindsight oracle against exhaustive
// enumeration on random mixed-sign lattice instances, and the reflected-walk
// identities on random +/-1 paths. Exit codes: 0 all exact, 1 mismatch
// (failing instance is printed verbatim), 2 max_horizon too large for
// enumeration.
int cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err);

struct SlopeOptions {
  std::string csv_path;
  std::string policy;
  std::string benchmark;
};

// Fits ln(mean_regret) against ln(T) for one (policy, benchmark) series of a
// results CSV and prints "slope X +/- Y". Nonpositive regrets are excluded
// with a warning. Exit codes: 0 ok, 1 missing series or too few points,
// 2 unreadable/invalid CSV.
int cmd_slope(const SlopeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace lfdr
