#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/core/random.hpp"
#include "perfdyn/instances/instances.hpp"
#include "perfdyn/minimizers/dynamics.hpp"

using namespace perfdyn;
using instances::PerdomoTightnessInstance;

namespace {

PerdomoTightnessInstance tightness(double epsilon, double theta0 = 1.0) {
  PerdomoTightnessInstance::Params p;
  p.epsilon = epsilon;
  p.theta0 = Vector::Constant(1, theta0);
  return PerdomoTightnessInstance(p);
}

RunOptions exact_options(std::size_t iterations) {
  RunOptions o;
  o.iterations = iterations;
  return o;
}

}  // namespace

TEST(Dataset, PoolScalesWeights) {
  const Dataset a = Dataset::uniform(Matrix::Constant(2, 1, 1.0));
  const Dataset b = Dataset::uniform(Matrix::Constant(1, 1, 4.0));
  const std::vector<const Dataset*> parts{&a, &b};
  const std::vector<double> w{0.5, 0.5};
  const Dataset p = Dataset::pool(parts, w);
  EXPECT_EQ(p.size(), 3);
  EXPECT_NEAR(p.w.sum(), 1.0, 1e-15);
  EXPECT_NEAR(p.weighted_mean()[0], 2.5, 1e-15);
}

TEST(Dataset, ConsolidatedMergesDuplicates) {
  Matrix x(4, 1);
  x << 1, 2, 1, 1;
  const Dataset c = Dataset::uniform(x).consolidated();
  ASSERT_EQ(c.size(), 2);
  EXPECT_EQ(c.x(0, 0), 1.0);
  EXPECT_NEAR(c.w[0], 0.75, 1e-15);
  EXPECT_NEAR(c.weighted_mean()[0], Dataset::uniform(x).weighted_mean()[0], 1e-15);
}

TEST(Schedule, Weights) {
  EXPECT_EQ(AggregationSchedule::window(2).weights(1), std::vector<double>{1.0});
  EXPECT_EQ(AggregationSchedule::window(2).weights(5), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(AggregationSchedule::all().weights(4).size(), 4u);
  EXPECT_EQ(AggregationSchedule::half_history().weights(6).size(), 3u);
  EXPECT_FALSE(AggregationSchedule::explicit_weights({-0.5, 1.5}).is_convex());
  EXPECT_THROW(AggregationSchedule::window(0), ScheduleError);
  EXPECT_THROW(AggregationSchedule::explicit_weights({0.3, 0.3}), ScheduleError);
}

TEST(Feasible, Projections) {
  EXPECT_NEAR(FeasibleSet::ball(1.0).project(Vector::Constant(1, 3.0))[0], 1.0, 1e-15);
  const Vector p = FeasibleSet::box(2, -1.0, 1.0).project((Vector(2) << 5.0, -0.5).finished());
  EXPECT_EQ(p, (Vector(2) << 1.0, -0.5).finished());
}

TEST(Solver, QuadraticInteriorMinimiser) {
  const Vector target = (Vector(2) << 0.3, -1.2).finished();
  SolverOptions o;
  o.lr = 0.5;
  o.max_iters = 10000;
  o.grad_tol = 1e-9;
  const auto r = inner_gradient_solver([&](const Vector& th) { return Vector(th - target); }, ParamVec::zeros(2),
                                       FeasibleSet::unconstrained(), o);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.x.values() - target).norm(), 1e-6);
}

TEST(Solver, StartAtMinimiserReturnsStart) {
  const auto r = inner_gradient_solver([](const Vector& th) { return Vector(th); }, ParamVec::zeros(3),
                                       FeasibleSet::unconstrained(), SolverOptions{});
  EXPECT_EQ(r.x, ParamVec::zeros(3));
}

TEST(Solver, LinearObjectiveOnBoxReachesCorner) {
  const Vector g = (Vector(2) << 1.0, -2.0).finished();
  SolverOptions o;
  o.lr = 0.1;
  const auto r = inner_gradient_solver([&](const Vector&) { return g; }, ParamVec::zeros(2),
                                       FeasibleSet::box(2, -1.0, 1.0), o);
  EXPECT_LT((r.x.values() - (Vector(2) << -1.0, 1.0).finished()).norm(), 1e-12);
}

TEST(Solver, MaxItersThrowsUnlessDisabled) {
  SolverOptions o;
  o.lr = 1e-6;
  o.max_iters = 5;
  const auto grad = [](const Vector& th) { return Vector(th.array() - 1.0); };
  EXPECT_THROW(inner_gradient_solver(grad, ParamVec::zeros(1), FeasibleSet::unconstrained(), o), NonConvergence);
  o.fail_on_max_iters = false;
  EXPECT_FALSE(inner_gradient_solver(grad, ParamVec::zeros(1), FeasibleSet::unconstrained(), o).converged);
}

TEST(RrmStep, ContractsByRateExactly) {
  const auto inst = tightness(0.5);
  Rng rng = make_rng(0, {});
  const auto next = rrm_step(ParamVec::scalar(0.8), inst, DataMode::exact(), SolverOptions{}, rng);
  EXPECT_NEAR(next[0], 0.4, 1e-15);
  EXPECT_EQ(rrm_step(ParamVec::scalar(0.0), inst, DataMode::exact(), SolverOptions{}, rng)[0], 0.0);
  EXPECT_EQ(rrm_step(ParamVec::scalar(3.0), tightness(0.0), DataMode::exact(), SolverOptions{}, rng)[0], 0.0);
}

TEST(RgdStep, ExactGradientStep) {
  const auto inst = tightness(0.5);
  Rng rng = make_rng(0, {});
  const double eta = 0.3;
  EXPECT_NEAR(rgd_step(ParamVec::scalar(1.0), inst, eta, DataMode::exact(), rng)[0], 1.0 - eta * (1.0 - 0.5), 1e-15);
  EXPECT_EQ(rgd_step(ParamVec::scalar(0.7), inst, 0.0, DataMode::exact(), rng)[0], 0.7);
}

TEST(ArmStep, WindowOneMatchesRrm) {
  const auto inst = tightness(0.5);
  SnapshotHistory h;
  h.push({0, ParamVec::scalar(0.2), std::nullopt, std::nullopt});
  h.push({1, ParamVec::scalar(0.6), std::nullopt, std::nullopt});
  Rng a = make_rng(9, {}), b = make_rng(9, {});
  const auto arm = arm_step(h, AggregationSchedule::window(1), inst, DataMode::empirical(200), SolverOptions{}, a);
  const auto rrm = rrm_step(ParamVec::scalar(0.6), inst, DataMode::empirical(200), SolverOptions{}, b);
  EXPECT_EQ(arm, rrm);
}

TEST(ArmStep, IdenticalSnapshotsMatchRrm) {
  const auto inst = tightness(0.5);
  SnapshotHistory h;
  for (std::size_t t = 0; t < 3; ++t) h.push({t, ParamVec::scalar(0.6), std::nullopt, std::nullopt});
  Rng rng = make_rng(1, {});
  const auto arm = arm_step(h, AggregationSchedule::all(), inst, DataMode::exact(), SolverOptions{}, rng);
  EXPECT_NEAR(arm[0], rrm_step(ParamVec::scalar(0.6), inst, DataMode::exact(), SolverOptions{}, rng)[0], 1e-15);
}

TEST(RunDynamics, DistanceColumnIsGeometric) {
  const auto traces = run_dynamics(tightness(0.5, 2.0), Method::rrm(), exact_options(30));
  ASSERT_EQ(traces.size(), 1u);
  for (const auto& row : traces[0].rows)
    EXPECT_NEAR(row.dist_to_ps, 2.0 * std::pow(0.5, static_cast<double>(row.t)), 1e-15 * 2.0);
}

TEST(RunDynamics, ZeroIterationsGivesInitialRow) {
  const auto traces = run_dynamics(tightness(0.5), Method::rrm(), exact_options(0));
  ASSERT_EQ(traces[0].rows.size(), 1u);
  EXPECT_EQ(traces[0].rows[0].theta[0], 1.0);
}

TEST(RunDynamics, SameSeedSameTraces) {
  RunOptions o = exact_options(10);
  o.mode = DataMode::empirical(100);
  o.runs = 3;
  o.seed = 42;
  const auto inst = tightness(0.5);
  const auto a = run_dynamics(inst, Method::arm(AggregationSchedule::window(2)), o);
  o.workers = 3;
  const auto b = run_dynamics(inst, Method::arm(AggregationSchedule::window(2)), o);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t t = 0; t <= 10; ++t) EXPECT_EQ(a[r].rows[t].theta, b[r].rows[t].theta);
}

TEST(RunDynamics, SignedWeightsOnlyInExactMode) {
  const auto method = Method::arm(AggregationSchedule::explicit_weights({-0.5, 1.5}));
  RunOptions o = exact_options(3);
  EXPECT_NO_THROW(run_dynamics(tightness(0.5), method, o));
  o.mode = DataMode::empirical(10);
  EXPECT_THROW(run_dynamics(tightness(0.5), method, o), ScheduleError);
}

TEST(DetectStable, ConstantTraceIsStableAtZero) {
  RunTrace t;
  for (std::size_t i = 0; i < 4; ++i) t.rows.push_back({i, ParamVec::scalar(1.0), 0.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(detect_stable(t, 1e-6), 0u);
}

TEST(DetectStable, GeometricDecayMatchesScan) {
  const auto traces = run_dynamics(tightness(0.5), Method::rrm(), exact_options(40));
  std::size_t expect = 0;
  while (std::pow(0.5, static_cast<double>(expect)) * 0.5 > 1e-6) ++expect;
  EXPECT_EQ(detect_stable(traces[0], 1e-6), expect);
}

TEST(DetectStable, DivergingTraceIsAbsent) {
  const auto traces = run_dynamics(tightness(1.5), Method::rrm(), exact_options(20));
  EXPECT_FALSE(detect_stable(traces[0], 1e-6).has_value());
}
