#include "perfdyn/minimizers/solver.hpp"

#include <cmath>

#include <fmt/format.h>

#include "perfdyn/core/errors.hpp"

namespace perfdyn {

SolverResult inner_gradient_solver(const GradientFn& gradient, const ParamVec& start, const FeasibleSet& feasible,
                                   const SolverOptions& options) {
  if (!(options.lr > 0.0)) throw InvalidInput("solver learning rate must be positive");
  Vector x = feasible.project(start.values());
  Vector m = Vector::Zero(x.size());
  Vector v = Vector::Zero(x.size());
  constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  double b1 = 1.0, b2 = 1.0;
  double norm = 0.0;
  for (std::size_t it = 0;; ++it) {
    const Vector g = gradient(x);
    if (!g.allFinite()) throw NonConvergence("gradient is not finite", x, INFINITY);
    norm = ((x - feasible.project(x - options.lr * g)) / options.lr).norm();
    if (norm <= options.grad_tol) return {ParamVec(x), norm, it, true};
    if (it == options.max_iters) break;
    if (options.optimizer == Optimizer::gradient_descent) {
      x = feasible.project(x - options.lr * g);
    } else {
      m = beta1 * m + (1.0 - beta1) * g;
      v = beta2 * v + (1.0 - beta2) * g.cwiseAbs2();
      b1 *= beta1;
      b2 *= beta2;
      const Vector step = (m / (1.0 - b1)).array() / ((v / (1.0 - b2)).array().sqrt() + adam_eps);
      x = feasible.project(x - options.lr * step);
    }
  }
  if (options.fail_on_max_iters)
    throw NonConvergence(fmt::format("inner solver hit {} iterations with gradient-mapping norm {:.3e} > {:.1e}",
                                     options.max_iters, norm, options.grad_tol),
                         x, norm);
  return {ParamVec(x), norm, options.max_iters, false};
}

}  // namespace perfdyn
