#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "perfdyn/instances/instances.hpp"
#include "perfdyn/metrics/metrics.hpp"

using namespace perfdyn;
using namespace perfdyn::metrics;

namespace {

instances::PerdomoTightnessInstance unit_instance(double epsilon) {
  instances::PerdomoTightnessInstance::Params p;
  p.epsilon = epsilon;
  return instances::PerdomoTightnessInstance(p);
}

// E_{N(m, 1)}[½(θ − z)²] = ½((θ − m)² + 1)
double hand_loss(double theta, double m) { return 0.5 * ((theta - m) * (theta - m) + 1.0); }

}  // namespace

TEST(LossShift, EqualDistributionsGiveZero) {
  const auto inst = unit_instance(1.0);
  const MetricOptions o;
  EXPECT_EQ(loss_shift(inst, ParamVec::scalar(0.3), ParamVec::scalar(0.5), ParamVec::scalar(0.5), o, 1), 0.0);
  EXPECT_EQ(loss_shift(inst, ParamVec::scalar(0.0), ParamVec::scalar(0.0), ParamVec::scalar(0.0), o, 1), 0.0);
}

TEST(LossShift, HandDerivedGaussianValue) {
  const auto inst = unit_instance(1.0);
  const double expect = std::abs(hand_loss(0.5, 0.5) - hand_loss(0.5, 1.0));
  EXPECT_NEAR(loss_shift(inst, ParamVec::scalar(0.5), ParamVec::scalar(0.5), ParamVec::scalar(1.0), {}, 1), expect,
              1e-15);
}

TEST(PerformativeRisk, ExactAndSampled) {
  const auto inst = unit_instance(1.0);
  EXPECT_NEAR(performative_risk(inst, ParamVec::scalar(0.0), {}, 1), 0.5, 1e-15);
  MetricOptions sampled;
  sampled.mode = MetricMode::sampled;
  sampled.n_eval = 100000;
  // ℓ = ½z² with z ~ N(0.4, 1): variance of ℓ is ½ + m² for m = 0.4.
  const double exact = performative_risk(inst, ParamVec::scalar(0.4), {}, 1);
  EXPECT_NEAR(exact, 0.5, 1e-15);
  const double sd = std::sqrt((0.5 + 0.16) / 1e5);
  EXPECT_NEAR(performative_risk(inst, ParamVec::scalar(0.4), sampled, 3), exact, 3.0 * sd);
}

TEST(Overlay, EqualCurvePassesBothDirections) {
  const std::vector<double> c{1.0, 0.5, 0.25};
  EXPECT_TRUE(overlay_check(c, c, Direction::lower, 0.9).passed);
  EXPECT_TRUE(overlay_check(c, c, Direction::upper, 0.9).passed);
  EXPECT_NEAR(overlay_check(c, c, Direction::upper, 1.0 - 1e-9).worst_ratio, 1.0, 1e-15);
  const std::vector<double> low{1.0, 0.4, 0.25};
  const auto r = overlay_check(low, c, Direction::lower, 0.9);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.worst_t, 1u);
}

TEST(Aggregate, MeanAndStandardError) {
  const auto s = column_stats({1.0, 2.0, 3.0, std::numeric_limits<double>::quiet_NaN()});
  EXPECT_EQ(s.count, 3u);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.se, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_DOUBLE_EQ(s.median, 2.0);
}

TEST(Aggregate, WindowMeanAndCsv) {
  std::vector<RunTrace> traces(2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t t = 0; t < 4; ++t)
      traces[r].rows.push_back({t, ParamVec::scalar(0.0), 0.0, static_cast<double>(t + r), 1.0, 0.0});
  const auto rows = aggregate(traces);
  EXPECT_DOUBLE_EQ(window_mean(rows, 1, 3, &AggregateRow::loss_shift), 2.5);
  std::ostringstream a, b;
  const std::vector<LabeledAggregate> labeled{{"rrm", rows}};
  write_aggregate_csv(a, labeled);
  write_aggregate_csv(b, labeled);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("method,t,", 0), 0u);
}
