#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "perfdyn/core/types.hpp"
#include "perfdyn/minimizers/dataset.hpp"
#include "perfdyn/minimizers/feasible.hpp"

namespace perfdyn {

enum class LossKind { quadratic_in_theta, prediction_loss };

// Loss evaluators. Sample evaluators are weighted means over a Dataset;
// moment evaluators take the instance's exact moment vector E_D[φ(z)], which
// is linear in mixtures of distributions. Empty functions mean "not declared".
struct LossSpec {
  LossKind kind = LossKind::quadratic_in_theta;
  double gamma = 1.0;

  std::function<double(const Vector& theta, const Dataset& data)> sample_loss;
  std::function<Vector(const Vector& theta, const Dataset& data)> sample_gradient;
  std::function<Vector(const Dataset& data, const FeasibleSet& feasible)> sample_argmin;

  std::function<double(const Vector& theta, const Vector& moments)> moment_loss;
  std::function<Vector(const Vector& theta, const Vector& moments)> moment_gradient;
  std::function<Vector(const Vector& moments, const FeasibleSet& feasible)> moment_argmin;
};

enum class ModeKind { exact, empirical };

struct DataMode {
  ModeKind kind = ModeKind::exact;
  std::size_t n = 0;

  static DataMode exact() { return {ModeKind::exact, 0}; }
  static DataMode empirical(std::size_t n) { return {ModeKind::empirical, n}; }
};

// A performative problem: the distribution map D(θ), the loss and the
// feasible set, plus whatever closed forms the instance knows.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  virtual Eigen::Index dim() const = 0;
  virtual ParamVec initial_point() const = 0;
  virtual const FeasibleSet& feasible() const = 0;
  virtual const LossSpec& loss() const = 0;

  virtual bool has_moments() const { return false; }
  virtual Vector moments(const ParamVec& deployed) const;

  // n draws from D(deployed). Implementations consume the same amount of
  // randomness whatever θ is, so equal seeds give coupled samples.
  virtual Dataset sample(const ParamVec& deployed, std::size_t n, Rng& rng) const = 0;

  virtual std::optional<ParamVec> stable_point() const { return std::nullopt; }

  // E_{D(deployed)}[ℓ(model)] in closed form, if known.
  virtual std::optional<double> expected_loss(const ParamVec& model, const ParamVec& deployed) const;
};

}  // namespace perfdyn
