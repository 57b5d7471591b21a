#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perfdyn/minimizers/dynamics.hpp"

namespace perfdyn::metrics {

struct MetricRow {
  std::size_t t;
  double delta_R;
  double perf_risk;
  std::optional<double> dist_to_ps;
};

// E_{D(deployed)}[ℓ(model)]: closed form when the problem has one (and the
// options allow it), otherwise the mean over n_eval draws seeded by `seed`.
double expected_loss(const Problem& problem, const ParamVec& model, const ParamVec& deployed,
                     const MetricOptions& options, std::uint64_t seed);

// |E_{D(current)}[ℓ(model)] − E_{D(previous)}[ℓ(model)]|. Both sampled terms
// share `seed`, so the two evaluation sets are coupled.
double loss_shift(const Problem& problem, const ParamVec& model, const ParamVec& current, const ParamVec& previous,
                  const MetricOptions& options, std::uint64_t seed);

double performative_risk(const Problem& problem, const ParamVec& model, const MetricOptions& options,
                         std::uint64_t seed);

struct StepMetrics {
  double loss_shift;
  double perf_risk;
};

// Both metrics for θ^t with one evaluation of the self-induced term.
StepMetrics evaluate_step(const Problem& problem, const ParamVec& theta, const std::optional<ParamVec>& previous,
                          const MetricOptions& options, std::uint64_t seed);

enum class Direction { upper, lower };

struct OverlayReport {
  bool passed;
  double worst_ratio;
  std::size_t worst_t;
  Direction direction;
  double slack;
};

// lower: min_t dist_t/curve_t ≥ slack. upper: max_t dist_t/curve_t ≤ 1/slack.
OverlayReport overlay_check(std::span<const double> dists, std::span<const double> curve, Direction direction,
                            double slack);

struct ColumnStats {
  double mean;
  double se;
  double median;
  std::size_t count;
};

ColumnStats column_stats(std::vector<double> values);

struct AggregateRow {
  std::size_t t;
  ColumnStats dist_to_ps;
  ColumnStats loss_shift;
  ColumnStats perf_risk;
};

// Across-run statistics per iteration, NaN entries skipped.
std::vector<AggregateRow> aggregate(std::span<const RunTrace> traces);

struct LabeledAggregate {
  std::string label;
  std::vector<AggregateRow> rows;
};

void write_aggregate_csv(std::ostream& out, std::span<const LabeledAggregate> methods, bool with_median = false);

// Mean of a column's per-iteration means over t in [t_lo, t_hi].
double window_mean(const std::vector<AggregateRow>& rows, std::size_t t_lo, std::size_t t_hi,
                   ColumnStats AggregateRow::*column);

std::string format_real(double v);

}  // namespace perfdyn::metrics
