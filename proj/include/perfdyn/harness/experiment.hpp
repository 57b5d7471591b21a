#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "perfdyn/harness/config.hpp"
#include "perfdyn/rideshare/game.hpp"

namespace perfdyn::harness {

struct BuiltInstance {
  std::unique_ptr<Problem> problem;  // null for rideshare
  std::optional<rideshare::MarketSpec> market;
  rideshare::UpdateOrder order = rideshare::UpdateOrder::simultaneous;
  std::size_t n_demand = 25;
  std::optional<SensitivityParams> sensitivity;
  std::optional<double> tail_constant;  // lower-bound instances, horizon = iterations
};

// Instance by name from the config's [instance] table; unknown keys are
// rejected with ConfigError.
BuiltInstance build_instance(const ExperimentConfig& config);

struct MethodResult {
  std::string label;
  std::vector<RunTrace> traces;
  std::vector<RunTrace> opponent;  // rideshare player 2
  std::vector<metrics::AggregateRow> aggregate;
  std::optional<metrics::OverlayReport> overlay;
  std::optional<std::size_t> runs_stable;  // runs passing detect_stable at stable_tol
  double seconds = 0.0;
};

struct ExperimentResult {
  std::string instance;
  std::vector<MethodResult> methods;
  std::vector<double> overlay_curve;
  std::string overlay_label;
  bool passed() const;
};

// Worker count: `workers` when given, else the config's, then PERFDYN_WORKERS.
ExperimentResult run_experiment(const ExperimentConfig& config, std::optional<std::size_t> workers = std::nullopt);

std::string aggregate_csv(const ExperimentResult& result, bool with_median);

// config.toml (verbatim), traces/<label>.csv, aggregate.csv, report.json.
void write_bundle(const ExperimentConfig& config, const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace perfdyn::harness
