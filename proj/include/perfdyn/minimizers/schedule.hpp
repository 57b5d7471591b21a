#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "perfdyn/core/types.hpp"
#include "perfdyn/minimizers/dataset.hpp"

namespace perfdyn {

class AggregationSchedule {
 public:
  enum class Mode { window, half_history, all, explicit_weights };

  static AggregationSchedule window(std::size_t tau);
  static AggregationSchedule half_history();
  static AggregationSchedule all();
  // Weights over the last k snapshots, oldest first. May be signed.
  static AggregationSchedule explicit_weights(std::vector<double> weights);

  Mode mode() const { return mode_; }
  std::size_t tau() const { return tau_; }
  bool is_convex() const;
  std::string label() const;

  // Weights for the most recent snapshots given `available` of them, oldest
  // first. While fewer than the window exist, all available snapshots get
  // uniform weight.
  std::vector<double> weights(std::size_t available) const;

 private:
  Mode mode_ = Mode::window;
  std::size_t tau_ = 1;
  std::vector<double> explicit_;
};

struct Snapshot {
  std::size_t t;
  ParamVec theta;
  std::optional<Vector> moments;
  std::optional<Dataset> data;
};

class SnapshotHistory {
 public:
  // keep_last == 0 keeps everything.
  explicit SnapshotHistory(std::size_t keep_last = 0) : keep_last_(keep_last) {}

  void push(Snapshot s);
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Snapshot& back() const { return entries_.back(); }
  const Snapshot& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::size_t keep_last_;
  std::deque<Snapshot> entries_;
};

}  // namespace perfdyn
