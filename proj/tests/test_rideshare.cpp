#include <cmath>

#include <gtest/gtest.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/core/random.hpp"
#include "perfdyn/rideshare/game.hpp"

using namespace perfdyn;
using namespace perfdyn::rideshare;

TEST(Market, DefaultsAreValid) {
  const MarketSpec m = make_market({});
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.z_base.size(), 11);
  for (int i = 0; i < 2; ++i) {
    EXPECT_TRUE((m.A_own[i].array() <= 0.0).all());
    EXPECT_LT(m.A_own[i].operatorNorm(), m.lambda);
  }
  EXPECT_TRUE((m.z_base.array() >= 50.0).all() && (m.z_base.array() <= 150.0).all());
}

TEST(Demand, ZeroPricesCentreOnBase) {
  const MarketSpec m = make_market({});
  Rng rng = make_rng(1, {key(Stream::data)});
  const std::size_t n = 2000;
  const Matrix z = demand_draw(m, 0, Vector::Zero(11), Vector::Zero(11), n, rng);
  ASSERT_EQ(z.rows(), static_cast<Eigen::Index>(n));
  const Vector mean = z.colwise().mean().transpose();
  EXPECT_LT((mean - m.z_base).cwiseAbs().maxCoeff(), 3.0 * 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Demand, RaisingOwnPriceLowersDemand) {
  const MarketSpec m = make_market({});
  const Vector low = Vector::Constant(11, 1.0), high = Vector::Constant(11, 2.0);
  const Vector a = m.mean_demand(0, low, low), b = m.mean_demand(0, high, low);
  EXPECT_TRUE((b.array() <= a.array()).all());
  EXPECT_TRUE((b.array() < a.array()).any());
}

TEST(BestResponse, Examples) {
  EXPECT_EQ(best_response_mean(Vector::Zero(11), 70.0), Vector::Zero(11));
  EXPECT_EQ(best_response_mean(Vector::Constant(11, 7000.0), 70.0), Vector::Constant(11, kPriceBound));
  EXPECT_LT((best_response_mean(Vector::Constant(11, 70.0), 70.0) - Vector::Ones(11)).norm(), 1e-15);
  const Matrix draws = Matrix::Constant(25, 11, 70.0);
  EXPECT_LT((best_response(draws, 70.0) - Vector::Ones(11)).norm(), 1e-15);
}

TEST(Game, DecoupledFirmsFollowSingleAgentRrm) {
  MarketSpec m = make_market({});
  m.A_cross[0].setZero();
  m.A_cross[1].setZero();
  GameOptions o;
  o.iterations = 5;
  o.runs = 1;
  o.n_demand = 25;
  const auto g = game_loop(m, {Method::rrm(), Method::rrm()}, o);
  const auto& rows = g.players[0][0].rows;
  // Each step is the best response to firm 1's own mean demand, up to the noise in 25 draws.
  const double band = 4.0 * m.noise_sd / std::sqrt(25.0) / m.lambda;
  for (std::size_t t = 1; t < rows.size(); ++t) {
    const Vector target = best_response_mean(m.mean_demand(0, rows[t - 1].theta.values(), Vector::Zero(11)), 70.0);
    EXPECT_LT((rows[t].theta.values() - target).cwiseAbs().maxCoeff(), band);
  }
}

TEST(Game, DeterministicAcrossWorkers) {
  const MarketSpec m = make_market({});
  GameOptions o;
  o.iterations = 6;
  o.runs = 4;
  o.seed = 3;
  const auto arm = Method::arm(AggregationSchedule::window(2));
  const auto a = game_loop(m, {arm, arm}, o);
  o.workers = 4;
  const auto b = game_loop(m, {arm, arm}, o);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t t = 0; t <= 6; ++t) {
      EXPECT_EQ(a.players[0][r].rows[t].theta, b.players[0][r].rows[t].theta);
      EXPECT_EQ(a.players[1][r].rows[t].theta, b.players[1][r].rows[t].theta);
    }
}

TEST(Game, RgdIsUnsupported) {
  GameOptions o;
  o.iterations = 2;
  o.runs = 1;
  EXPECT_THROW(game_loop(make_market({}), {Method::rgd(0.1), Method::rrm()}, o), UnsupportedMode);
}

TEST(Game, AllHistoryLowersLossShift) {
  const MarketSpec m = make_market({});
  GameOptions o;
  o.iterations = 40;
  o.runs = 50;
  o.seed = 1;
  auto shift = [&](const Method& method) {
    const auto g = game_loop(m, {method, method}, o);
    double s = 0.0;
    for (const auto& run : g.players[0])
      for (std::size_t t = 20; t <= 40; ++t) s += run.rows[t].loss_shift;
    return s;
  };
  EXPECT_LT(shift(Method::arm(AggregationSchedule::all())), shift(Method::rrm()));
}
