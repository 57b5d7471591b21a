#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace perfdyn::harness {

// aggregate.csv read back: columns per method label, in file order.
struct AggregateTable {
  std::vector<std::string> columns;
  std::vector<std::string> methods;
  std::map<std::string, std::map<std::string, std::vector<double>>> data;

  // Throws InvalidInput naming the missing column or method.
  const std::vector<double>& column(const std::string& method, const std::string& name) const;
  bool has_column(const std::string& name) const;
};

AggregateTable read_aggregate_csv(const std::filesystem::path& path);

struct BundleOverlay {
  std::string label;
  std::vector<double> curve;
};

// The overlay stored in report.json, empty when the bundle has none.
BundleOverlay read_bundle_overlay(const std::filesystem::path& bundle);

}  // namespace perfdyn::harness
