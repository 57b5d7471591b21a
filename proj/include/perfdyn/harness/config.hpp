#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "perfdyn/instances/instances.hpp"
#include "perfdyn/metrics/metrics.hpp"
#include "perfdyn/minimizers/dynamics.hpp"

namespace perfdyn::harness {

using ParamValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

struct ParamEntry {
  ParamValue value;
  std::optional<std::size_t> line;
};

// Typed access to a config table. Every getter marks its key as used;
// finish() rejects keys nobody asked for.
class ParamMap {
 public:
  ParamMap() = default;
  ParamMap(std::string prefix, std::map<std::string, ParamEntry> entries)
      : prefix_(std::move(prefix)), entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  double number(const std::string& key, double fallback) const;
  std::optional<double> optional_number(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;  // integer >= 0
  bool flag(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  void finish() const;

  const std::map<std::string, ParamEntry>& entries() const { return entries_; }

 private:
  const ParamEntry* find(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string prefix_;
  std::map<std::string, ParamEntry> entries_;
  mutable std::set<std::string> used_;
};

struct OverlayConfig {
  instances::RateKind rate = instances::RateKind::perdomo_arm_lower;
  metrics::Direction direction = metrics::Direction::lower;
  double slack = 0.9;
  // "tail_constant", "initial_distance", or a positive number.
  std::string scale = "initial_distance";
};

struct ExperimentConfig {
  std::string instance;
  ParamMap params;
  std::vector<Method> methods;
  std::size_t iterations = 1;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  DataMode mode = DataMode::exact();
  SolverOptions solver;
  MetricOptions metrics;
  bool median = false;
  std::optional<double> stable_tol;
  std::size_t workers = 0;
  std::optional<std::filesystem::path> output;
  std::optional<OverlayConfig> overlay;

  std::string source;  // the config text, verbatim
  std::filesystem::path origin;
};

const std::vector<std::string>& known_instances();

// Throws ConfigError with the offending key and line.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& origin = "<memory>");
ExperimentConfig load_config(const std::filesystem::path& path);

std::string rate_kind_name(instances::RateKind kind);

}  // namespace perfdyn::harness
