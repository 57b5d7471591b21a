#include "perfdyn/minimizers/schedule.hpp"

#include <cmath>
#include <numeric>

#include "perfdyn/core/errors.hpp"

namespace perfdyn {

AggregationSchedule AggregationSchedule::window(std::size_t tau) {
  if (tau < 1) throw ScheduleError("window size must be >= 1");
  AggregationSchedule s;
  s.mode_ = Mode::window;
  s.tau_ = tau;
  return s;
}

AggregationSchedule AggregationSchedule::half_history() {
  AggregationSchedule s;
  s.mode_ = Mode::half_history;
  return s;
}

AggregationSchedule AggregationSchedule::all() {
  AggregationSchedule s;
  s.mode_ = Mode::all;
  return s;
}

AggregationSchedule AggregationSchedule::explicit_weights(std::vector<double> weights) {
  if (weights.empty()) throw ScheduleError("explicit schedule needs at least one weight");
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw ScheduleError("explicit weights must sum to 1");
  AggregationSchedule s;
  s.mode_ = Mode::explicit_weights;
  s.tau_ = weights.size();
  s.explicit_ = std::move(weights);
  return s;
}

bool AggregationSchedule::is_convex() const {
  for (double w : explicit_)
    if (w < 0.0) return false;
  return true;
}

std::string AggregationSchedule::label() const {
  switch (mode_) {
    case Mode::window:
      return "tau=" + std::to_string(tau_);
    case Mode::half_history:
      return "tau=half";
    case Mode::all:
      return "tau=all";
    case Mode::explicit_weights:
      return "explicit";
  }
  return "?";
}

std::vector<double> AggregationSchedule::weights(std::size_t available) const {
  if (available == 0) throw ScheduleError("schedule needs at least one snapshot");
  std::size_t m = available;
  switch (mode_) {
    case Mode::window:
      m = std::min(tau_, available);
      break;
    case Mode::half_history:
      m = std::max<std::size_t>(1, (available + 1) / 2);
      break;
    case Mode::all:
      break;
    case Mode::explicit_weights:
      if (available >= explicit_.size()) return explicit_;
      break;
  }
  return std::vector<double>(m, 1.0 / static_cast<double>(m));
}

void SnapshotHistory::push(Snapshot s) {
  if (!entries_.empty() && s.t <= entries_.back().t)
    throw InvalidInput("snapshot iterations must be strictly increasing");
  entries_.push_back(std::move(s));
  if (keep_last_ > 0 && entries_.size() > keep_last_) entries_.pop_front();
}

}  // namespace perfdyn
