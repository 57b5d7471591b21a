#pragma once

#include "perfdyn/core/types.hpp"

namespace perfdyn {

class FeasibleSet {
 public:
  enum class Kind { unconstrained, ball, box };

  static FeasibleSet unconstrained();
  static FeasibleSet ball(double radius);
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet box(Eigen::Index d, double lower, double upper);

  Kind kind() const { return kind_; }
  double radius() const { return radius_; }
  Vector project(const Vector& v) const;
  bool contains(const Vector& v, double tol = 1e-12) const;

 private:
  Kind kind_ = Kind::unconstrained;
  double radius_ = 0.0;
  Vector lower_;
  Vector upper_;
};

}  // namespace perfdyn
