#pragma once

#include <cstddef>
#include <functional>

#include "perfdyn/core/types.hpp"
#include "perfdyn/minimizers/feasible.hpp"

namespace perfdyn {

enum class Optimizer { gradient_descent, adam };

struct SolverOptions {
  Optimizer optimizer = Optimizer::gradient_descent;
  double lr = 3e-4;
  std::size_t max_iters = 2000;
  double grad_tol = 1e-7;
  // When false, hitting max_iters returns the last iterate instead of throwing.
  bool fail_on_max_iters = true;
  bool use_closed_form = true;
};

struct SolverResult {
  ParamVec x;
  double grad_mapping_norm;
  std::size_t iterations;
  bool converged;
};

using GradientFn = std::function<Vector(const Vector& theta)>;

// Projected gradient (or projected Adam) from `start`. Convergence is measured
// by the gradient mapping ‖(x − P(x − lr·g))/lr‖.
SolverResult inner_gradient_solver(const GradientFn& gradient, const ParamVec& start, const FeasibleSet& feasible,
                                   const SolverOptions& options);

}  // namespace perfdyn
