#include "perfdyn/minimizers/dynamics.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/metrics/metrics.hpp"

namespace perfdyn {

std::size_t resolve_workers(std::size_t requested) {
  if (const char* env = std::getenv("PERFDYN_WORKERS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0') requested = v;
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t history_capacity(const Method& method) {
  if (method.kind != Method::Kind::arm) return 1;
  switch (method.schedule.mode()) {
    case AggregationSchedule::Mode::window:
    case AggregationSchedule::Mode::explicit_weights:
      return method.schedule.tau();
    default:
      return 0;
  }
}

RunTrace run_one(const Problem& problem, const Method& method, const RunOptions& options,
                 const std::optional<ParamVec>& stable, std::size_t run) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  const bool exact = options.mode.kind == ModeKind::exact;
  const AggregationSchedule schedule =
      method.kind == Method::Kind::arm ? method.schedule : AggregationSchedule::window(1);

  RunTrace trace;
  trace.run = run;
  trace.rows.reserve(options.iterations + 1);
  SnapshotHistory history(history_capacity(method));
  ParamVec theta = problem.initial_point();

  auto record = [&](std::size_t t, const std::optional<ParamVec>& previous) {
    metrics::StepMetrics m{kNaN, kNaN};
    if (options.metrics.enabled)
      m = metrics::evaluate_step(problem, theta, previous, options.metrics,
                                 derive_seed(options.seed, {run, t, key(Stream::evaluation)}));
    const double dist = stable ? theta.distance(*stable) : kNaN;
    const double wall = std::chrono::duration<double>(clock::now() - started).count();
    trace.rows.push_back({t, theta, dist, m.loss_shift, m.perf_risk, wall});
  };

  std::size_t t = 0;
  try {
    record(0, std::nullopt);
    for (; t < options.iterations; ++t) {
      Rng rng = make_rng(options.seed, {run, t, key(Stream::data)});
      Snapshot snap{t, theta, std::nullopt, std::nullopt};
      if (exact)
        snap.moments = problem.moments(theta);
      else
        snap.data = problem.sample(theta, options.mode.n, rng);

      ParamVec next = theta;
      if (method.kind == Method::Kind::rgd) {
        const LossSpec& loss = problem.loss();
        const Vector g = exact ? loss.moment_gradient(theta.values(), *snap.moments)
                               : loss.sample_gradient(theta.values(), *snap.data);
        next = ParamVec(problem.feasible().project(theta.values() - method.eta * g));
        history.push(std::move(snap));
      } else {
        history.push(std::move(snap));
        next = arm_step(history, schedule, problem, options.mode, options.solver, rng);
      }
      ParamVec previous = theta;
      theta = std::move(next);
      record(t + 1, previous);
    }
  } catch (const RunError&) {
    throw;
  } catch (const Error& e) {
    throw RunError(std::string(e.what()) + " (run " + std::to_string(run) + ", iteration " + std::to_string(t) + ")",
                   run, t);
  }
  return trace;
}

}  // namespace

std::vector<RunTrace> run_dynamics(const Problem& problem, const Method& method, const RunOptions& options) {
  if (options.runs < 1) throw InvalidInput("runs must be >= 1");
  if (options.mode.kind == ModeKind::empirical && options.mode.n < 1) throw InvalidInput("empirical mode needs n >= 1");
  if (options.mode.kind == ModeKind::empirical && method.kind == Method::Kind::arm && !method.schedule.is_convex())
    throw ScheduleError("signed aggregation weights are only valid in exact mode");
  const std::optional<ParamVec> stable = problem.stable_point();
  std::vector<RunTrace> traces(options.runs);
  parallel_for(options.runs, resolve_workers(options.workers),
               [&](std::size_t run) { traces[run] = run_one(problem, method, options, stable, run); });
  return traces;
}

std::optional<std::size_t> detect_stable(const RunTrace& trace, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  for (std::size_t t = 0; t + 1 < trace.rows.size(); ++t)
    if (trace.rows[t + 1].theta.distance(trace.rows[t].theta) <= tol) return t;
  return std::nullopt;
}

}  // namespace perfdyn
