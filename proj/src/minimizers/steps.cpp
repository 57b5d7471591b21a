#include "perfdyn/minimizers/steps.hpp"

#include <vector>

#include "perfdyn/core/errors.hpp"

namespace perfdyn {

Vector Problem::moments(const ParamVec&) const {
  throw UnsupportedMode(name() + " has no closed-form moments");
}

std::optional<double> Problem::expected_loss(const ParamVec& model, const ParamVec& deployed) const {
  if (!has_moments() || !loss().moment_loss) return std::nullopt;
  return loss().moment_loss(model.values(), moments(deployed));
}

Method Method::rgd(double eta) {
  if (!(eta >= 0.0)) throw InvalidInput("eta must be nonnegative");
  Method m;
  m.kind = Kind::rgd;
  m.eta = eta;
  return m;
}

Method Method::arm(AggregationSchedule schedule) {
  Method m;
  m.kind = Kind::arm;
  m.schedule = std::move(schedule);
  return m;
}

std::string Method::label() const {
  switch (kind) {
    case Kind::rrm:
      return "rrm";
    case Kind::rgd:
      return "rgd";
    case Kind::arm:
      return "arm_" + schedule.label();
  }
  return "?";
}

ParamVec minimize_moments(const Vector& moments, const ParamVec& start, const Problem& problem,
                          const SolverOptions& solver) {
  const LossSpec& loss = problem.loss();
  if (solver.use_closed_form && loss.moment_argmin) return ParamVec(loss.moment_argmin(moments, problem.feasible()));
  if (!loss.moment_gradient) throw UnsupportedMode(problem.name() + " declares no moment gradient");
  auto grad = [&](const Vector& th) { return loss.moment_gradient(th, moments); };
  return inner_gradient_solver(grad, start, problem.feasible(), solver).x;
}

ParamVec minimize_dataset(const Dataset& data, const ParamVec& start, const Problem& problem,
                          const SolverOptions& solver) {
  const LossSpec& loss = problem.loss();
  if (solver.use_closed_form && loss.sample_argmin) return ParamVec(loss.sample_argmin(data, problem.feasible()));
  if (!loss.sample_gradient) throw UnsupportedMode(problem.name() + " declares no sample gradient");
  auto grad = [&](const Vector& th) { return loss.sample_gradient(th, data); };
  return inner_gradient_solver(grad, start, problem.feasible(), solver).x;
}

namespace {

void require_samples(const DataMode& mode) {
  if (mode.kind == ModeKind::empirical && mode.n < 1) throw InvalidInput("empirical mode needs n >= 1");
}

}  // namespace

ParamVec rrm_step(const ParamVec& current, const Problem& problem, const DataMode& mode, const SolverOptions& solver,
                  Rng& rng) {
  require_samples(mode);
  if (mode.kind == ModeKind::exact) return minimize_moments(problem.moments(current), current, problem, solver);
  return minimize_dataset(problem.sample(current, mode.n, rng), current, problem, solver);
}

ParamVec rgd_step(const ParamVec& current, const Problem& problem, double eta, const DataMode& mode, Rng& rng) {
  if (!(eta >= 0.0)) throw InvalidInput("eta must be nonnegative");
  require_samples(mode);
  const LossSpec& loss = problem.loss();
  Vector g;
  if (mode.kind == ModeKind::exact) {
    if (!loss.moment_gradient) throw UnsupportedMode(problem.name() + " declares no moment gradient");
    g = loss.moment_gradient(current.values(), problem.moments(current));
  } else {
    if (!loss.sample_gradient) throw UnsupportedMode(problem.name() + " declares no sample gradient");
    g = loss.sample_gradient(current.values(), problem.sample(current, mode.n, rng));
  }
  return ParamVec(problem.feasible().project(current.values() - eta * g));
}

ParamVec arm_step(const SnapshotHistory& history, const AggregationSchedule& schedule, const Problem& problem,
                  const DataMode& mode, const SolverOptions& solver, Rng& rng) {
  require_samples(mode);
  if (history.empty()) throw ScheduleError("ARM step needs at least one snapshot");
  const std::vector<double> alpha = schedule.weights(history.size());
  const std::size_t first = history.size() - alpha.size();
  const ParamVec& start = history.back().theta;

  if (mode.kind == ModeKind::exact) {
    Vector mix;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const Snapshot& s = history[first + i];
      const Vector m = s.moments ? *s.moments : problem.moments(s.theta);
      if (i == 0) mix = Vector::Zero(m.size());
      mix += alpha[i] * m;
    }
    return minimize_moments(mix, start, problem, solver);
  }

  for (double a : alpha)
    if (a < 0.0) throw ScheduleError("signed aggregation weights are only valid in exact mode");
  std::vector<Dataset> drawn;
  drawn.reserve(alpha.size());
  std::vector<const Dataset*> parts;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const Snapshot& s = history[first + i];
    if (s.data) {
      parts.push_back(&*s.data);
    } else {
      drawn.push_back(problem.sample(s.theta, mode.n, rng));
      parts.push_back(&drawn.back());
    }
  }
  if (parts.size() == 1) return minimize_dataset(*parts.front(), start, problem, solver);
  return minimize_dataset(Dataset::pool(parts, alpha).consolidated(), start, problem, solver);
}

}  // namespace perfdyn
