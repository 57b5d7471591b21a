#include "perfdyn/rideshare/game.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "perfdyn/core/errors.hpp"

namespace perfdyn::rideshare {

namespace {

struct Firm {
  AggregationSchedule schedule;
  std::size_t capacity;  // 0 keeps everything
  std::vector<Vector> means;

  explicit Firm(const Method& m) : schedule(resolve(m)), capacity(cap(schedule)) {}

  static AggregationSchedule resolve(const Method& m) {
    switch (m.kind) {
      case Method::Kind::rrm:
        return AggregationSchedule::window(1);
      case Method::Kind::arm:
        if (!m.schedule.is_convex())
          throw ScheduleError("signed aggregation weights are only valid in exact mode");
        return m.schedule;
      case Method::Kind::rgd:
        break;
    }
    throw UnsupportedMode("the pricing game supports rrm and arm only");
  }

  static std::size_t cap(const AggregationSchedule& s) {
    switch (s.mode()) {
      case AggregationSchedule::Mode::window:
        return s.tau();
      case AggregationSchedule::Mode::explicit_weights:
        return s.weights(1u << 20).size();
      default:
        return 0;
    }
  }

  Vector respond(const Vector& fresh_mean, double lambda) {
    means.push_back(fresh_mean);
    if (capacity > 0 && means.size() > capacity) means.erase(means.begin());
    const std::vector<double> alpha = schedule.weights(means.size());
    const std::size_t first = means.size() - alpha.size();
    Vector mix = Vector::Zero(fresh_mean.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) mix += alpha[i] * means[first + i];
    return best_response_mean(mix, lambda);
  }
};

Vector initial_price(const GameOptions& o, std::size_t run, std::size_t player, std::size_t L) {
  Rng rng = make_rng(o.seed, {run, key(Stream::init), player});
  std::uniform_real_distribution<double> u01;
  Vector x(static_cast<Eigen::Index>(L));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u01(rng);
  return x;
}

Vector draw_mean(const MarketSpec& spec, const GameOptions& o, std::size_t run, std::size_t t, std::size_t player,
                 const Vector& own, const Vector& opp) {
  Rng rng = make_rng(o.seed, {run, t, key(Stream::data), player});
  return demand_draw(spec, player, own, opp, o.n_demand, rng).colwise().mean().transpose();
}

}  // namespace

double player_loss(const MarketSpec& spec, const Vector& x1_model, const Vector& x1, const Vector& x2) {
  return -spec.mean_demand(0, x1, x2).dot(x1_model) + 0.5 * spec.lambda * x1_model.squaredNorm();
}

GameResult game_loop(const MarketSpec& spec, const std::array<Method, 2>& methods, const GameOptions& options) {
  spec.validate();
  if (options.runs < 1 || options.iterations < 1) throw InvalidInput("runs and iterations must be >= 1");
  if (options.n_demand < 1) throw InvalidInput("n_demand must be >= 1");
  Firm probe0(methods[0]), probe1(methods[1]);  // validates both methods up front

  GameResult result;
  for (auto& p : result.players) p.resize(options.runs);
  const auto start = std::chrono::steady_clock::now();

  parallel_for(options.runs, resolve_workers(options.workers), [&](std::size_t run) {
    std::array<Firm, 2> firms{Firm(methods[0]), Firm(methods[1])};
    std::array<Vector, 2> x{initial_price(options, run, 0, spec.locations),
                            initial_price(options, run, 1, spec.locations)};
    auto record = [&](std::size_t t, double shift) {
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const double risk = player_loss(spec, x[0], x[0], x[1]);
      result.players[0][run].rows.push_back({t, ParamVec(x[0]), NAN, shift, risk, wall});
      result.players[1][run].rows.push_back({t, ParamVec(x[1]), NAN, NAN, NAN, wall});
    };
    result.players[0][run].run = run;
    result.players[1][run].run = run;
    record(0, NAN);
    for (std::size_t t = 0; t < options.iterations; ++t) {
      const std::array<Vector, 2> prev = x;
      try {
        if (options.order == UpdateOrder::simultaneous) {
          const Vector m0 = draw_mean(spec, options, run, t, 0, x[0], x[1]);
          const Vector m1 = draw_mean(spec, options, run, t, 1, x[1], x[0]);
          x[0] = firms[0].respond(m0, spec.lambda);
          x[1] = firms[1].respond(m1, spec.lambda);
        } else {
          x[0] = firms[0].respond(draw_mean(spec, options, run, t, 0, x[0], x[1]), spec.lambda);
          x[1] = firms[1].respond(draw_mean(spec, options, run, t, 1, x[1], x[0]), spec.lambda);
        }
      } catch (const Error& e) {
        throw RunError(e.what(), run, t + 1);
      }
      const double shift =
          std::abs(player_loss(spec, x[0], x[0], x[1]) - player_loss(spec, x[0], prev[0], prev[1]));
      record(t + 1, shift);
    }
  });
  return result;
}

}  // namespace perfdyn::rideshare
