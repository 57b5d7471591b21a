#pragma once

#include <span>

#include "perfdyn/core/types.hpp"

namespace perfdyn {

// Weighted sample set. Rows of `x` are samples; `y` is empty for unlabeled
// data; weights sum to one.
struct Dataset {
  Matrix x;
  Vector y;
  Vector w;

  static Dataset uniform(Matrix x, Vector y = Vector());

  Eigen::Index size() const { return x.rows(); }
  bool has_labels() const { return y.size() > 0; }
  Vector weighted_mean() const;

  // Concatenates parts, scaling each part's weights by its mixture weight.
  static Dataset pool(std::span<const Dataset* const> parts, std::span<const double> weights);

  // Merges rows with identical (x, y), summing their weights. Row order is
  // first-occurrence order.
  Dataset consolidated() const;
};

}  // namespace perfdyn
