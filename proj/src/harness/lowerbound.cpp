#include "perfdyn/harness/lowerbound.hpp"

#include <cmath>

#include <fmt/format.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/harness/bundle.hpp"
#include "perfdyn/harness/experiment.hpp"

namespace perfdyn::harness {

bool LowerBoundReport::passed() const {
  for (const auto& [label, r] : methods)
    if (!r.passed) return false;
  return !methods.empty();
}

LowerBoundReport lowerbound_check(const std::filesystem::path& bundle, Framework framework, double slack) {
  if (!(slack > 0.0)) throw InvalidInput("slack must be positive");
  const ExperimentConfig cfg = load_config(bundle / "config.toml");
  const std::string expected = framework == Framework::perdomo ? "perdomo_lowerbound" : "mofakhami_lowerbound";
  if (cfg.instance != expected)
    throw ConfigError(fmt::format("bundle instance is '{}', framework needs '{}'", cfg.instance, expected),
                      "experiment.instance");
  const BuiltInstance built = build_instance(cfg);
  const auto kind = framework == Framework::perdomo ? instances::RateKind::perdomo_arm_lower
                                                    : instances::RateKind::mofakhami_lower;
  LowerBoundReport report{framework, instances::rate_factor(kind, *built.sensitivity), *built.tail_constant, slack,
                          {}};
  const AggregateTable table = read_aggregate_csv(bundle / "aggregate.csv");
  for (const auto& method : table.methods) {
    const std::vector<double>& dist = table.column(method, "dist_to_ps_mean");
    std::vector<double> curve(dist.size());
    for (std::size_t t = 0; t < dist.size(); ++t)
      curve[t] = report.tail_constant * std::pow(report.rate, static_cast<double>(t));
    report.methods.emplace_back(method, metrics::overlay_check(dist, curve, metrics::Direction::lower, slack));
  }
  return report;
}

std::string format_report(const LowerBoundReport& r) {
  std::string out = fmt::format("framework {}  rate {:.6g}  K {:.6g}  slack {:g}\n",
                                r.framework == Framework::perdomo ? "perdomo" : "mofakhami", r.rate, r.tail_constant,
                                r.slack);
  for (const auto& [label, o] : r.methods)
    out += fmt::format("{} {}  min ratio {:.6g} at t={}\n", o.passed ? "PASS" : "FAIL", label, o.worst_ratio,
                       o.worst_t);
  return out;
}

}  // namespace perfdyn::harness
