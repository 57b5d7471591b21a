#pragma once

#include <string>

#include "perfdyn/minimizers/problem.hpp"
#include "perfdyn/minimizers/schedule.hpp"
#include "perfdyn/minimizers/solver.hpp"

namespace perfdyn {

struct Method {
  enum class Kind { rrm, rgd, arm };
  Kind kind = Kind::rrm;
  AggregationSchedule schedule = AggregationSchedule::window(1);
  double eta = 0.0;

  static Method rrm() { return {}; }
  static Method rgd(double eta);
  static Method arm(AggregationSchedule schedule);
  std::string label() const;
};

ParamVec rrm_step(const ParamVec& current, const Problem& problem, const DataMode& mode,
                  const SolverOptions& solver, Rng& rng);

ParamVec rgd_step(const ParamVec& current, const Problem& problem, double eta, const DataMode& mode, Rng& rng);

// Snapshots lacking moments (exact mode) or data (empirical mode) are filled
// on the fly, drawing datasets from `rng` oldest first.
ParamVec arm_step(const SnapshotHistory& history, const AggregationSchedule& schedule, const Problem& problem,
                  const DataMode& mode, const SolverOptions& solver, Rng& rng);

// Minimisers behind the steps, exposed for environments that build their own
// training mixtures.
ParamVec minimize_moments(const Vector& moments, const ParamVec& start, const Problem& problem,
                          const SolverOptions& solver);
ParamVec minimize_dataset(const Dataset& data, const ParamVec& start, const Problem& problem,
                          const SolverOptions& solver);

}  // namespace perfdyn
