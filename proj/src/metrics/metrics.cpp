#include "perfdyn/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "perfdyn/core/errors.hpp"

namespace perfdyn::metrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<double> closed_form(const Problem& problem, const ParamVec& model, const ParamVec& deployed,
                                  const MetricOptions& options) {
  if (options.mode == MetricMode::sampled) return std::nullopt;
  auto v = problem.expected_loss(model, deployed);
  if (!v && options.mode == MetricMode::exact)
    throw UnsupportedMode(problem.name() + " has no closed-form expected loss");
  return v;
}

double sampled_loss(const Problem& problem, const ParamVec& model, const ParamVec& deployed,
                    const MetricOptions& options, std::uint64_t seed) {
  if (options.n_eval < 1) throw InvalidInput("n_eval must be >= 1");
  if (!problem.loss().sample_loss) throw UnsupportedMode(problem.name() + " declares no sample loss");
  Rng rng(seed);
  return problem.loss().sample_loss(model.values(), problem.sample(deployed, options.n_eval, rng));
}

}  // namespace

double expected_loss(const Problem& problem, const ParamVec& model, const ParamVec& deployed,
                     const MetricOptions& options, std::uint64_t seed) {
  if (auto v = closed_form(problem, model, deployed, options)) return *v;
  return sampled_loss(problem, model, deployed, options, seed);
}

double loss_shift(const Problem& problem, const ParamVec& model, const ParamVec& current, const ParamVec& previous,
                  const MetricOptions& options, std::uint64_t seed) {
  return std::abs(expected_loss(problem, model, current, options, seed) -
                  expected_loss(problem, model, previous, options, seed));
}

double performative_risk(const Problem& problem, const ParamVec& model, const MetricOptions& options,
                         std::uint64_t seed) {
  return expected_loss(problem, model, model, options, seed);
}

StepMetrics evaluate_step(const Problem& problem, const ParamVec& theta, const std::optional<ParamVec>& previous,
                          const MetricOptions& options, std::uint64_t seed) {
  const double risk = expected_loss(problem, theta, theta, options, seed);
  double shift = kNaN;
  if (previous) shift = std::abs(risk - expected_loss(problem, theta, *previous, options, seed));
  return {shift, risk};
}

OverlayReport overlay_check(std::span<const double> dists, std::span<const double> curve, Direction direction,
                            double slack) {
  if (dists.size() != curve.size()) throw InvalidInput("trace and curve lengths differ");
  if (dists.empty()) throw InvalidInput("overlay needs at least one point");
  if (!(slack > 0.0)) throw InvalidInput("slack must be positive");
  OverlayReport r{true, direction == Direction::lower ? INFINITY : -INFINITY, 0, direction, slack};
  for (std::size_t t = 0; t < dists.size(); ++t) {
    const double ratio = dists[t] / curve[t];
    const bool worse = direction == Direction::lower ? ratio < r.worst_ratio : ratio > r.worst_ratio;
    if (worse || std::isnan(ratio)) {
      r.worst_ratio = ratio;
      r.worst_t = t;
      if (std::isnan(ratio)) break;
    }
  }
  if (std::isnan(r.worst_ratio))
    r.passed = false;
  else if (direction == Direction::lower)
    r.passed = r.worst_ratio >= slack;
  else
    r.passed = r.worst_ratio <= 1.0 / slack;
  return r;
}

ColumnStats column_stats(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  const std::size_t n = values.size();
  if (n == 0) return {kNaN, kNaN, kNaN, 0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  std::sort(values.begin(), values.end());
  const double median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return {mean, se, median, n};
}

std::vector<AggregateRow> aggregate(std::span<const RunTrace> traces) {
  if (traces.empty()) return {};
  const std::size_t rows = traces.front().rows.size();
  for (const RunTrace& tr : traces)
    if (tr.rows.size() != rows) throw InvalidInput("traces differ in length");
  std::vector<AggregateRow> out;
  out.reserve(rows);
  std::vector<double> d, s, r;
  for (std::size_t i = 0; i < rows; ++i) {
    d.clear();
    s.clear();
    r.clear();
    for (const RunTrace& tr : traces) {
      d.push_back(tr.rows[i].dist_to_ps);
      s.push_back(tr.rows[i].loss_shift);
      r.push_back(tr.rows[i].perf_risk);
    }
    out.push_back({traces.front().rows[i].t, column_stats(d), column_stats(s), column_stats(r)});
  }
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

void write_aggregate_csv(std::ostream& out, std::span<const LabeledAggregate> methods, bool with_median) {
  out << "method,t,runs,dist_to_ps_mean,dist_to_ps_se,loss_shift_mean,loss_shift_se,perf_risk_mean,perf_risk_se";
  if (with_median) out << ",dist_to_ps_median,loss_shift_median,perf_risk_median";
  out << '\n';
  for (const LabeledAggregate& m : methods) {
    for (const AggregateRow& row : m.rows) {
      const std::size_t runs = std::max({row.dist_to_ps.count, row.loss_shift.count, row.perf_risk.count});
      out << m.label << ',' << row.t << ',' << runs;
      for (const ColumnStats* c : {&row.dist_to_ps, &row.loss_shift, &row.perf_risk})
        out << ',' << format_real(c->mean) << ',' << format_real(c->se);
      if (with_median)
        for (const ColumnStats* c : {&row.dist_to_ps, &row.loss_shift, &row.perf_risk})
          out << ',' << format_real(c->median);
      out << '\n';
    }
  }
}

double window_mean(const std::vector<AggregateRow>& rows, std::size_t t_lo, std::size_t t_hi,
                   ColumnStats AggregateRow::*column) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const AggregateRow& row : rows) {
    if (row.t < t_lo || row.t > t_hi) continue;
    const double v = (row.*column).mean;
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : kNaN;
}

}  // namespace perfdyn::metrics
