#pragma once

#include <string>

#include "perfdyn/minimizers/problem.hpp"

namespace perfdyn::instances {

// Problems with loss ℓ(θ, z) = (γ/2)‖θ − τ(z)‖². The moment vector is
// (E τ(z), E‖τ(z)‖²), which determines the expected loss, its gradient and the
// minimiser proj(E τ(z)).
class TargetQuadraticProblem : public Problem {
 public:
  TargetQuadraticProblem(std::string name, Eigen::Index d, double gamma, LossKind kind, FeasibleSet feasible,
                         ParamVec theta0);
  TargetQuadraticProblem(const TargetQuadraticProblem&) = delete;
  TargetQuadraticProblem& operator=(const TargetQuadraticProblem&) = delete;

  std::string name() const override { return name_; }
  Eigen::Index dim() const override { return d_; }
  ParamVec initial_point() const override { return theta0_; }
  const FeasibleSet& feasible() const override { return feasible_; }
  const LossSpec& loss() const override { return loss_; }
  bool has_moments() const override { return true; }

  // τ(z) for one sample row.
  virtual Vector target(const Vector& z) const = 0;

  void set_initial_point(ParamVec theta0);

 protected:
  void set_feasible(FeasibleSet feasible) { feasible_ = std::move(feasible); }
  Vector targets_mean(const Dataset& data) const;
  double targets_sq_mean(const Dataset& data) const;

 private:
  std::string name_;
  Eigen::Index d_;
  FeasibleSet feasible_;
  ParamVec theta0_;
  LossSpec loss_;
};

}  // namespace perfdyn::instances
