#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "perfdyn/metrics/metrics.hpp"

namespace perfdyn::harness {

enum class Framework { perdomo, mofakhami };

struct LowerBoundReport {
  Framework framework;
  double rate;
  double tail_constant;
  double slack;
  std::vector<std::pair<std::string, metrics::OverlayReport>> methods;
  bool passed() const;
};

// Rebuilds the bundle's lower-bound instance from its config echo and checks
// min_t dist_t / (K·rate^t) ≥ slack for every method in aggregate.csv.
LowerBoundReport lowerbound_check(const std::filesystem::path& bundle, Framework framework, double slack);

std::string format_report(const LowerBoundReport& report);

}  // namespace perfdyn::harness
