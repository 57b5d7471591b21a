#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "perfdyn/minimizers/dynamics.hpp"
#include "perfdyn/rideshare/market.hpp"

namespace perfdyn::rideshare {

enum class UpdateOrder { simultaneous, alternating };

struct GameOptions {
  std::size_t iterations = 40;
  std::size_t runs = 200;
  std::uint64_t seed = 0;
  std::size_t n_demand = 25;
  UpdateOrder order = UpdateOrder::simultaneous;
  std::size_t workers = 1;
};

// Per-run traces for each player. Row t holds the player's prices in `theta`;
// loss_shift and perf_risk are filled for player 1 only (NaN for player 2),
// evaluated in closed form from the mean demand.
struct GameResult {
  std::array<std::vector<RunTrace>, 2> players;
};

// Expected player-1 loss −E[z₁]ᵀx₁ + (λ/2)‖x₁‖² at prices (x1, x2).
double player_loss(const MarketSpec& spec, const Vector& x1_model, const Vector& x1, const Vector& x2);

// Both firms follow `methods[i]` (rrm or arm). ARM mixes each firm's own past
// demand datasets with the schedule weights.
GameResult game_loop(const MarketSpec& spec, const std::array<Method, 2>& methods, const GameOptions& options);

}  // namespace perfdyn::rideshare
