#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "perfdyn/minimizers/steps.hpp"

namespace perfdyn {

enum class MetricMode { automatic, exact, sampled };

struct MetricOptions {
  bool enabled = true;
  MetricMode mode = MetricMode::automatic;
  std::size_t n_eval = 10000;
};

struct TraceRow {
  std::size_t t;
  ParamVec theta;
  double dist_to_ps;  // NaN when the stable point is unknown
  double loss_shift;  // NaN at t = 0 or when metrics are off
  double perf_risk;
  double wall_seconds;
};

struct RunTrace {
  std::size_t run = 0;
  std::vector<TraceRow> rows;
};

struct RunOptions {
  std::size_t iterations = 1;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  DataMode mode = DataMode::exact();
  SolverOptions solver;
  MetricOptions metrics;
  std::size_t workers = 1;
};

// Worker count after applying the PERFDYN_WORKERS override; 0 means all cores.
std::size_t resolve_workers(std::size_t requested);

// Runs `fn(i)` for i in [0, count) on up to `workers` threads. The first
// exception (by index) is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

std::vector<RunTrace> run_dynamics(const Problem& problem, const Method& method, const RunOptions& options);

// First t with ‖θ^{t+1} − θ^t‖ ≤ tol.
std::optional<std::size_t> detect_stable(const RunTrace& trace, double tol);

void write_trace_csv(std::ostream& out, std::span<const RunTrace> traces);

}  // namespace perfdyn
