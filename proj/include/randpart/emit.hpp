#pragma once

#include <string>
#include <vector>

#include "randpart/experiments.hpp"

namespace randpart {

// Canonical float formatting for emitted results: 12 significant digits
// ("%.12g"), NaN spelled "nan". JSON output parses these same strings back to
// doubles, so both formats encode identical numbers.
std::string format_sig12(double value);

std::string csv_header();

// One row per result under the fixed header
// kind,n,t,trials,seed,success,estimate,stderr,ci_lo,ci_hi,elapsed_ms.
std::string emit_csv(const std::vector<EstimateResult>& results);

// Same fields; extras and retained per-trial arrays appear only here. A single
// result is an object, several (a scan) an array. NaN becomes null.
std::string emit_json(const std::vector<EstimateResult>& results);

// Canonical form for files: wall-clock is the one field runs cannot reproduce,
// so file sinks record elapsed_ms = 0 and only console output keeps timings.
void zero_elapsed(std::vector<EstimateResult>& results);

}  // namespace randpart
