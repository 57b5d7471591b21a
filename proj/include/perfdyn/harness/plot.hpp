#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace perfdyn::harness {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dotted = false;
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

// Standalone SVG. Non-finite points (and nonpositive ones on a log axis) are
// skipped, splitting the polyline.
std::string render_svg(const Figure& figure);

// distance.svg (with the overlay curve when present), loss_shift.svg and
// perf_risk.svg from a bundle's aggregate.csv. Returns the files written.
std::vector<std::filesystem::path> plot_bundle(const std::filesystem::path& bundle);

}  // namespace perfdyn::harness
