#include "perfdyn/minimizers/feasible.hpp"

#include "perfdyn/core/errors.hpp"

namespace perfdyn {

FeasibleSet FeasibleSet::unconstrained() { return {}; }

FeasibleSet FeasibleSet::ball(double radius) {
  if (!(radius > 0.0)) throw InvalidInput("ball radius must be positive");
  FeasibleSet f;
  f.kind_ = Kind::ball;
  f.radius_ = radius;
  return f;
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0) throw InvalidInput("box bounds differ in size");
  if ((lower.array() > upper.array()).any()) throw InvalidInput("box lower bound exceeds upper bound");
  FeasibleSet f;
  f.kind_ = Kind::box;
  f.lower_ = std::move(lower);
  f.upper_ = std::move(upper);
  return f;
}

FeasibleSet FeasibleSet::box(Eigen::Index d, double lower, double upper) {
  return box(Vector::Constant(d, lower), Vector::Constant(d, upper));
}

Vector FeasibleSet::project(const Vector& v) const {
  switch (kind_) {
    case Kind::unconstrained:
      return v;
    case Kind::ball: {
      const double n = v.norm();
      return n <= radius_ ? v : Vector(v * (radius_ / n));
    }
    case Kind::box:
      if (v.size() != lower_.size()) throw InvalidInput("box dimension mismatch");
      return v.cwiseMax(lower_).cwiseMin(upper_);
  }
  return v;
}

bool FeasibleSet::contains(const Vector& v, double tol) const {
  switch (kind_) {
    case Kind::unconstrained:
      return true;
    case Kind::ball:
      return v.norm() <= radius_ * (1.0 + tol);
    case Kind::box:
      return ((v.array() >= lower_.array() - tol) && (v.array() <= upper_.array() + tol)).all();
  }
  return true;
}

}  // namespace perfdyn
