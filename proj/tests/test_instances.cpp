#include <cmath>

#include <gtest/gtest.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/core/random.hpp"
#include "perfdyn/instances/instances.hpp"
#include "perfdyn/minimizers/dynamics.hpp"

using namespace perfdyn;
using namespace perfdyn::instances;

namespace {

bool in_span(const ParamVec& v, Eigen::Index k) {
  return v.values().tail(v.dim() - k).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

TEST(PerdomoTightness, UpdateExamples) {
  PerdomoTightnessInstance::Params p;
  p.epsilon = 2.49;
  p.beta = 1.0;
  p.gamma = 5.0;
  const PerdomoTightnessInstance inst(p);
  EXPECT_NEAR(perdomo_tightness_update(inst, ParamVec::scalar(1.0))[0], 0.498, 1e-15);
  EXPECT_EQ(perdomo_tightness_update(inst, ParamVec::scalar(0.0))[0], 0.0);
}

TEST(PerdomoTightness, EmpiricalStepWithinClt) {
  PerdomoTightnessInstance::Params p;
  p.epsilon = 2.49;
  p.gamma = 5.0;
  const PerdomoTightnessInstance inst(p);
  Rng rng = make_rng(8, {key(Stream::data)});
  const std::size_t n = 100000;
  const auto next = rrm_step(ParamVec::scalar(1.0), inst, DataMode::empirical(n), SolverOptions{}, rng);
  // θ' = (β/γ)·mean(z), z ~ N(2.49, 1): sd (1/5)/√n.
  EXPECT_NEAR(next[0], 0.498, 3.0 * 0.2 / std::sqrt(static_cast<double>(n)));
}

TEST(MofakhamiTightness, UpdateExamples) {
  const MofakhamiTightnessInstance inst({1.0, 1.0, 1.0, std::nullopt});
  EXPECT_EQ(mofakhami_tightness_update(inst, ParamVec::scalar(0.0))[0], 0.0);
  const double r = inst.radius();
  EXPECT_GE(mofakhami_tightness_update(inst, ParamVec::scalar(r))[0], r * (1.0 - 1e-9));
  for (double th : {0.1 * r, 0.5 * r, r}) {
    ParamVec theta = ParamVec::scalar(th);
    EXPECT_GE(mofakhami_tightness_update(inst, theta)[0], std::min(inst.rate() * th, r) * (1.0 - 1e-12));
  }
}

TEST(MofakhamiTightness, SteepRegimeStaysAway) {
  const MofakhamiTightnessInstance inst({2.25, 1.0, 1.0, std::nullopt});
  RunOptions o;
  o.iterations = 100;
  const auto trace = run_dynamics(inst, Method::rrm(), o).front();
  for (const auto& row : trace.rows) EXPECT_GE(std::abs(row.theta[0]), 0.5 * inst.radius());
}

TEST(PerdomoLowerBound, StablePointAndSpanGrowth) {
  const PerdomoLowerBoundInstance inst({2.49, 1.0, 5.0, 1.0, 40});
  const auto ps = *inst.stable_point();
  EXPECT_LT(perdomo_lowerbound_update(inst, ps).distance(ps), 1e-12);
  ParamVec theta(Vector::Unit(40, 0));
  for (Eigen::Index t = 1; t <= 5; ++t) {
    theta = perdomo_lowerbound_update(inst, theta);
    EXPECT_TRUE(in_span(theta, t + 1)) << "t=" << t;
  }
}

TEST(PerdomoLowerBound, DistanceAboveTailConstant) {
  const PerdomoLowerBoundInstance inst({2.49, 1.0, 5.0, 1.0, 40});
  const double K = inst.tail_constant(20);
  EXPECT_GT(K, 0.0);
  ParamVec theta(Vector::Unit(40, 0));
  const auto ps = *inst.stable_point();
  for (int t = 0; t <= 20; ++t) {
    EXPECT_GE(theta.distance(ps), K * std::pow(0.249, t) * (1.0 - 1e-12)) << "t=" << t;
    theta = perdomo_lowerbound_update(inst, theta);
  }
}

TEST(MofakhamiLowerBound, UpdateFromZeroAndSpanGrowth) {
  MofakhamiLowerBoundInstance::Params p;
  p.d = 12;
  const MofakhamiLowerBoundInstance inst(p);
  ParamVec theta = mofakhami_lowerbound_update(inst, ParamVec::zeros(12));
  EXPECT_GT(theta[0], 0.0);
  EXPECT_TRUE(in_span(theta, 1));
  for (Eigen::Index t = 2; t <= 6; ++t) {
    theta = mofakhami_lowerbound_update(inst, theta);
    EXPECT_TRUE(in_span(theta, t)) << "t=" << t;
  }
  const auto ps = *inst.stable_point();
  EXPECT_LT(mofakhami_lowerbound_update(inst, ps).distance(ps), 1e-12);
  EXPECT_LE(ps.norm(), inst.radius());
}

TEST(MofakhamiLowerBound, RatioAboveTheoremRate) {
  MofakhamiLowerBoundInstance::Params p;
  p.delta = 0.001;
  p.d = 40;
  const MofakhamiLowerBoundInstance inst(p);
  const auto ps = *inst.stable_point();
  ParamVec theta = ParamVec::zeros(40);
  const double floor = (1.0 / (1.0 / std::exp(1.0) + 2.0)) * 1.0 * 0.95;
  double prev = theta.distance(ps);
  for (int t = 1; t <= 20; ++t) {
    theta = mofakhami_lowerbound_update(inst, theta);
    const double d = theta.distance(ps);
    EXPECT_GE(d / prev, floor) << "t=" << t;
    prev = d;
  }
}

TEST(TiltedCoin, DeclaredConstants) {
  const TiltedCoinInstance inst({1.02, 0.98, 1.0, 1.0, std::nullopt});
  EXPECT_NEAR(std::sqrt(inst.epsilon()), 1.02, 1e-12);
  EXPECT_NEAR(inst.slope(), 0.98, 1e-12);
  // χ² sensitivity: χ²(D(b), D(a)) ≤ ε|a − b|² across the feasible interval.
  const double r = inst.radius();
  for (double a : {-r, -0.3 * r, 0.0, 0.8 * r})
    for (double b : {-0.9 * r, 0.1 * r, r})
      EXPECT_LE(inst.chi2(a, b), inst.epsilon() * (a - b) * (a - b) * (1.0 + 1e-12));
}

TEST(RateCurve, Examples) {
  SensitivityParams s;
  s.epsilon = 0.5;
  s.beta = 1.0;
  s.gamma = 1.0;
  EXPECT_NEAR(rate_curve(RateKind::perdomo_upper, s, 3)[3], 0.125, 1e-15);
  SensitivityParams f;
  f.epsilon = 2.49;
  f.beta = 1.0;
  f.gamma = 5.0;
  const auto curve = rate_curve(RateKind::perdomo_arm_lower, f, 20);
  for (std::size_t t = 0; t <= 20; ++t) EXPECT_NEAR(curve[t], std::pow(0.249, static_cast<double>(t)), 1e-15);
  EXPECT_NEAR(arm_upper_constant(), 0.96593, 5e-6);
  EXPECT_NEAR(1.0 / arm_upper_constant(), 1.035, 5e-4);
}

TEST(RateCurve, ArmGuaranteeBoundary) {
  SensitivityParams s;
  s.epsilon = 1.02 * 1.02;
  EXPECT_TRUE(arm_contraction_guaranteed(s));
  s.epsilon = 1.04 * 1.04;
  EXPECT_FALSE(arm_contraction_guaranteed(s));
}
