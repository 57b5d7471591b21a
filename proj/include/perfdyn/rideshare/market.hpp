#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "perfdyn/core/random.hpp"
#include "perfdyn/core/types.hpp"

namespace perfdyn::rideshare {

inline constexpr double kPriceBound = 30.0;

// Linear demand for two firms: z_i = A_own[i]·x_i + A_cross[i]·x_{-i} + ξ,
// ξ ~ N(z_base, noise_sd² I).
struct MarketSpec {
  std::size_t locations = 11;
  double lambda = 70.0;
  double noise_sd = 1.0;
  std::array<Matrix, 2> A_own;
  std::array<Matrix, 2> A_cross;
  Vector z_base;

  // Sign and shape invariants; throws InvalidInput.
  void validate() const;
  Vector mean_demand(std::size_t player, const Vector& x_own, const Vector& x_opp) const;
};

struct MarketOptions {
  std::size_t locations = 11;
  double lambda = 70.0;
  double noise_sd = 1.0;
  double offdiag_density = 0.2;
  double offdiag_weight = 0.1;
  double cross_scale = 0.5;
  double elasticity_scale = 1.0;
  double z_lo = 50.0;
  double z_hi = 150.0;
  std::uint64_t seed = 11;
};

// A_own = −s(D + w·O), A_cross = c·s(D' + w·O') with D, D' diagonal in
// [0.5, 1.5] and O, O' masked uniform off-diagonals; rescaled so that
// ‖A_own‖₂ < λ. z_base uniform in [z_lo, z_hi].
MarketSpec make_market(const MarketOptions& options);

// `location,mean_demand` rows, one per location, in location order.
Vector load_z_base_csv(const std::string& path, std::size_t locations);

bool in_price_box(const Vector& x);

// n × L matrix of demand draws for `player`.
Matrix demand_draw(const MarketSpec& spec, std::size_t player, const Vector& x_own, const Vector& x_opp, std::size_t n,
                   Rng& rng);

// clip(z̄/λ, [−30, 30]), the exact minimiser of −z̄ᵀx + (λ/2)‖x‖² over the box.
Vector best_response(const Matrix& demand, double lambda);
Vector best_response_mean(const Vector& mean_demand, double lambda);

}  // namespace perfdyn::rideshare
