#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "perfdyn/core/types.hpp"

namespace perfdyn {

using PredictionFn = std::function<Vector(const Vector& x)>;
using Sampler = std::function<Vector(Rng& rng)>;
using Density = std::function<double(const Vector& x)>;

// Finite support: one atom per row, with probabilities.
struct DiscreteSupport {
  Matrix atoms;
  Vector probs;
};

// Which density weights ‖f_a − f_b‖², and how the integral is evaluated.
class WeightedNormSpec {
 public:
  enum class Mode { exact, monte_carlo };

  static WeightedNormSpec exact(DiscreteSupport support);
  static WeightedNormSpec monte_carlo(Sampler sampler, std::size_t samples,
                                      std::optional<DiscreteSupport> support = std::nullopt);
  // Requests exact mode on a reference that may only be samplable.
  static WeightedNormSpec exact_request(Sampler sampler, std::optional<DiscreteSupport> support);

  Mode mode() const { return mode_; }
  std::size_t samples() const { return samples_; }
  const std::optional<DiscreteSupport>& support() const { return support_; }
  const Sampler& sampler() const { return sampler_; }

 private:
  Mode mode_ = Mode::exact;
  std::size_t samples_ = 0;
  std::optional<DiscreteSupport> support_;
  Sampler sampler_;
};

// ∫‖f_a(x) − f_b(x)‖² p(x) dx. `rng` is only touched in Monte Carlo mode.
double weighted_norm_sq(const PredictionFn& f_a, const PredictionFn& f_b, const WeightedNormSpec& spec,
                        Rng* rng = nullptr);

struct SharedCovChi2 {
  double value;            // 1 − exp(−q/2), the expression the construction states
  double quadratic_bound;  // q/2
  double standard;         // exp(q) − 1, the usual closed form
};

// q = Δμᵀ Σ⁻¹ Δμ with Σ taken from `cov` (its mean is ignored).
SharedCovChi2 chi2_gaussian_shared_cov(const Vector& mu1, const Vector& mu2, const GaussianSpec& cov);

// Σ (p − q)² / q over a common finite support.
double chi2_exact(std::span<const double> p, std::span<const double> q);

// Unbiased estimate of ∫(p − q)²/q from n draws of p, averaging (p−q)²/(p q).
double chi2_monte_carlo(const Sampler& p_sampler, const Density& p_density, const Density& q_density,
                        std::size_t n, Rng& rng);

double w1_gaussian_bound(const GaussianSpec& a, const GaussianSpec& b);

}  // namespace perfdyn
