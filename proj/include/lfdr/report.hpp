#pragma once

#include <ostream>
#include <string>

#include "lfdr/sim.hpp"

namespace lfdr {

// Writes result rows as CSV with the fixed header
//   policy,T,benchmark,mean_regret,stderr,mean_reward,replications,seed
// in the exact order produced by run_experiment. Floating-point fields use
// %.10g, so identical runs serialize byte-identically.
void write_csv(std::ostream& out, const ExperimentResult& result);
std::string to_csv(const ExperimentResult& result);

// Self-contained SVG chart of mean regret against horizon, one polyline per
// (policy, benchmark) series, log-log axes. Nonpositive regrets are dropped
// from the drawing (they have no log coordinate).
void write_svg(std::ostream& out, const ExperimentResult& result, const std::string& title);

}  // namespace lfdr
