#include "perfdyn/instances/target_quadratic.hpp"

#include "perfdyn/core/errors.hpp"

namespace perfdyn::instances {

TargetQuadraticProblem::TargetQuadraticProblem(std::string name, Eigen::Index d, double gamma, LossKind kind,
                                               FeasibleSet feasible, ParamVec theta0)
    : name_(std::move(name)), d_(d), feasible_(std::move(feasible)), theta0_(std::move(theta0)) {
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
  if (theta0_.dim() != d_) throw InvalidInput("initial point has the wrong dimension");
  loss_.kind = kind;
  loss_.gamma = gamma;
  loss_.sample_loss = [this, gamma](const Vector& th, const Dataset& data) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < data.size(); ++i)
      total += data.w[i] * (th - target(data.x.row(i).transpose())).squaredNorm();
    return 0.5 * gamma * total;
  };
  loss_.sample_gradient = [this, gamma](const Vector& th, const Dataset& data) -> Vector {
    return gamma * (th - targets_mean(data));
  };
  loss_.sample_argmin = [this](const Dataset& data, const FeasibleSet& f) { return f.project(targets_mean(data)); };
  loss_.moment_loss = [d, gamma](const Vector& th, const Vector& m) {
    return 0.5 * gamma * (th.squaredNorm() - 2.0 * th.dot(m.head(d)) + m[d]);
  };
  loss_.moment_gradient = [d, gamma](const Vector& th, const Vector& m) -> Vector {
    return gamma * (th - m.head(d));
  };
  loss_.moment_argmin = [d](const Vector& m, const FeasibleSet& f) { return f.project(m.head(d)); };
}

void TargetQuadraticProblem::set_initial_point(ParamVec theta0) {
  if (theta0.dim() != d_) throw InvalidInput("initial point has the wrong dimension");
  theta0_ = std::move(theta0);
}

Vector TargetQuadraticProblem::targets_mean(const Dataset& data) const {
  Vector m = Vector::Zero(d_);
  for (Eigen::Index i = 0; i < data.size(); ++i) m += data.w[i] * target(data.x.row(i).transpose());
  return m;
}

double TargetQuadraticProblem::targets_sq_mean(const Dataset& data) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) s += data.w[i] * target(data.x.row(i).transpose()).squaredNorm();
  return s;
}

}  // namespace perfdyn::instances
