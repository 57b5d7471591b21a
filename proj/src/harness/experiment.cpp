#include "perfdyn/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/rir/credit.hpp"

namespace perfdyn::harness {

namespace {

Vector vector_param(const ParamMap& p, const std::string& key, const Vector& fallback) {
  if (!p.has(key)) return fallback;
  const ParamEntry& e = p.entries().at(key);
  if (std::holds_alternative<std::vector<double>>(e.value)) {
    const std::vector<double> v = p.numbers(key, {});
    if (v.empty()) throw ConfigError("expected a non-empty array", "instance." + key, e.line);
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return Vector::Constant(1, p.number(key, 0.0));
}

std::filesystem::path relative_to(const ExperimentConfig& cfg, const std::string& file) {
  const std::filesystem::path p(file);
  if (p.is_absolute() || cfg.origin == "<memory>") return p;
  return cfg.origin.parent_path() / p;
}

// Converts construction errors into config errors that name the instance table.
template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), "instance");
  }
}

BuiltInstance build_credit(const ExperimentConfig& cfg) {
  const ParamMap& p = cfg.params;
  const double delta = p.number("delta", 0.55);
  const std::size_t hidden = p.count("hidden", 16);
  const std::size_t features = p.count("features", 11);
  std::vector<std::size_t> strategic;
  for (double v : p.numbers("strategic_indices", {0.0, 1.0})) {
    if (v < 0.0 || v != std::floor(v)) throw ConfigError("strategic indices must be integers >= 0", "instance.strategic_indices");
    strategic.push_back(static_cast<std::size_t>(v));
  }
  const std::string base_kind = p.text("base", "synthetic");
  rir::SyntheticBaseOptions bo;
  bo.features = features;
  bo.strategic = strategic;
  bo.atoms_per_strategic = p.count("atoms_per_strategic", bo.atoms_per_strategic);
  bo.nonstrategic_atoms = p.count("nonstrategic_atoms", bo.nonstrategic_atoms);
  bo.base_rate = p.number("base_rate", bo.base_rate);
  bo.strategic_weight = p.number("strategic_weight", bo.strategic_weight);
  bo.nonstrategic_weight = p.number("nonstrategic_weight", bo.nonstrategic_weight);
  bo.seed = static_cast<std::uint64_t>(p.count("base_seed", bo.seed));
  const std::string csv = p.text("csv", "");
  const bool standardize = p.flag("standardize", true);

  SolverOptions pre;
  pre.optimizer = Optimizer::adam;
  pre.lr = p.number("pretrain_lr", 1e-2);
  pre.max_iters = p.count("pretrain_iters", 5000);
  pre.grad_tol = 1e-9;
  pre.fail_on_max_iters = false;
  const std::size_t pretrain_n = p.count("pretrain_samples", 2000);
  p.finish();

  return guarded([&] {
    std::shared_ptr<const rir::BaseDistribution> base;
    if (base_kind == "synthetic") {
      base = rir::make_synthetic_base(bo);
    } else if (base_kind == "gaussian") {
      base = rir::make_gaussian_block_base(bo);
    } else if (base_kind == "csv") {
      if (csv.empty()) throw ConfigError("base = \"csv\" needs instance.csv", "instance.csv");
      base = rir::load_credit_csv(relative_to(cfg, csv).string(), strategic, features, standardize).base;
    } else {
      throw ConfigError(fmt::format("unknown base '{}' (synthetic, gaussian, csv)", base_kind), "instance.base");
    }
    const rir::CreditModel model(features, hidden, delta);
    const rir::RejectionRule rule(delta);
    const rir::CreditProblem scratch(base, model, rule, ParamVec::zeros(static_cast<Eigen::Index>(model.parameter_count())));
    const ParamVec theta0 = rir::fit_on_base(scratch, pretrain_n, pre, cfg.seed);
    BuiltInstance out;
    out.problem = std::make_unique<rir::CreditProblem>(base, model, rule, theta0);
    return out;
  });
}

BuiltInstance build_rideshare(const ExperimentConfig& cfg) {
  const ParamMap& p = cfg.params;
  rideshare::MarketOptions mo;
  mo.locations = p.count("locations", mo.locations);
  mo.lambda = p.number("lambda", mo.lambda);
  mo.noise_sd = p.number("noise_sd", mo.noise_sd);
  mo.offdiag_density = p.number("offdiag_density", mo.offdiag_density);
  mo.offdiag_weight = p.number("offdiag_weight", mo.offdiag_weight);
  mo.cross_scale = p.number("cross_scale", mo.cross_scale);
  mo.elasticity_scale = p.number("elasticity_scale", mo.elasticity_scale);
  mo.z_lo = p.number("z_lo", mo.z_lo);
  mo.z_hi = p.number("z_hi", mo.z_hi);
  mo.seed = static_cast<std::uint64_t>(p.count("market_seed", mo.seed));
  const std::string z_csv = p.text("z_base_csv", "");
  const std::string order = p.text("order", "simultaneous");
  BuiltInstance out;
  out.n_demand = p.count("n_demand", 25);
  p.finish();
  if (order == "simultaneous") {
    out.order = rideshare::UpdateOrder::simultaneous;
  } else if (order == "alternating") {
    out.order = rideshare::UpdateOrder::alternating;
  } else {
    throw ConfigError("order must be 'simultaneous' or 'alternating'", "instance.order", p.entries().at("order").line);
  }
  if (cfg.mode.kind != ModeKind::empirical)
    throw ConfigError("the pricing game samples demand; set experiment.mode = \"empirical\"", "experiment.mode");
  return guarded([&] {
    rideshare::MarketSpec spec = rideshare::make_market(mo);
    if (!z_csv.empty()) {
      spec.z_base = rideshare::load_z_base_csv(relative_to(cfg, z_csv).string(), mo.locations);
      spec.validate();
    }
    out.market = std::move(spec);
    return std::move(out);
  });
}

std::string rate_formula(instances::RateKind kind) {
  using instances::RateKind;
  switch (kind) {
    case RateKind::perdomo_upper:
      return "(εβ/γ)^t";
    case RateKind::perdomo_arm_lower:
      return "(εβ/2γ)^t";
    case RateKind::mofakhami_upper:
      return "(√εM/γ)^t";
    case RateKind::mofakhami_lower:
      return "((1/(1/e+2))·√εM/γ)^t";
    case RateKind::arm_upper:
      return "(√((√3+2)/4)·√εM/γ)^t";
  }
  return "rate^t";
}

}  // namespace

BuiltInstance build_instance(const ExperimentConfig& cfg) {
  const ParamMap& p = cfg.params;
  const auto default_d = static_cast<std::int64_t>(std::max<std::size_t>(2 * cfg.iterations, 2));
  const std::string& name = cfg.instance;
  if (name == "credit") return build_credit(cfg);
  if (name == "rideshare") return build_rideshare(cfg);

  BuiltInstance out;
  if (name == "perdomo_tightness") {
    instances::PerdomoTightnessInstance::Params q;
    q.epsilon = p.number("epsilon", q.epsilon);
    q.beta = p.number("beta", q.beta);
    q.gamma = p.number("gamma", q.gamma);
    q.sigma_sq = p.number("sigma_sq", q.sigma_sq);
    q.theta0 = vector_param(p, "theta0", q.theta0);
    p.finish();
    out.problem = guarded([&] { return std::make_unique<instances::PerdomoTightnessInstance>(q); });
    out.sensitivity = SensitivityParams{q.epsilon, 1.0, q.gamma, 1.0, 1.0, q.beta};
  } else if (name == "mofakhami_tightness") {
    instances::MofakhamiTightnessInstance::Params q;
    q.epsilon = p.number("epsilon", q.epsilon);
    q.M = p.number("M", q.M);
    q.gamma = p.number("gamma", q.gamma);
    q.theta0 = p.optional_number("theta0");
    p.finish();
    out.problem = guarded([&] { return std::make_unique<instances::MofakhamiTightnessInstance>(q); });
    out.sensitivity = SensitivityParams{q.epsilon, q.M, q.gamma, 1.0, 1.0, std::nullopt};
  } else if (name == "perdomo_lowerbound") {
    instances::PerdomoLowerBoundInstance::Params q;
    q.epsilon = p.number("epsilon", q.epsilon);
    q.beta = p.number("beta", q.beta);
    q.gamma = p.number("gamma", q.gamma);
    q.sigma_sq = p.number("sigma_sq", q.sigma_sq);
    q.d = p.integer("d", default_d);
    p.finish();
    auto inst = guarded([&] { return std::make_unique<instances::PerdomoLowerBoundInstance>(q); });
    out.tail_constant = inst->tail_constant(cfg.iterations);
    out.problem = std::move(inst);
    out.sensitivity = SensitivityParams{q.epsilon, 1.0, q.gamma, 1.0, 1.0, q.beta};
  } else if (name == "mofakhami_lowerbound") {
    instances::MofakhamiLowerBoundInstance::Params q;
    q.epsilon = p.number("epsilon", q.epsilon);
    q.M = p.number("M", q.M);
    q.gamma = p.number("gamma", q.gamma);
    q.delta = p.number("delta", q.delta);
    q.sigma = p.number("sigma", q.sigma);
    q.L = p.optional_number("L");
    q.d = p.integer("d", default_d);
    const std::string model = p.text("expectation", "printed");
    p.finish();
    if (model == "printed") {
      q.model = instances::ExpectationModel::printed;
    } else if (model == "exact") {
      q.model = instances::ExpectationModel::exact;
    } else {
      throw ConfigError("expectation must be 'printed' or 'exact'", "instance.expectation",
                        p.entries().at("expectation").line);
    }
    auto inst = guarded([&] { return std::make_unique<instances::MofakhamiLowerBoundInstance>(q); });
    out.tail_constant = inst->tail_constant(cfg.iterations);
    out.problem = std::move(inst);
    out.sensitivity = SensitivityParams{q.epsilon, q.M, q.gamma, 1.0, 1.0, std::nullopt};
  } else if (name == "tilted_coin") {
    instances::TiltedCoinInstance::Params q;
    q.rate = p.number("rate", q.rate);
    q.slope = p.number("slope", q.slope);
    q.M = p.number("M", q.M);
    q.gamma = p.number("gamma", q.gamma);
    q.theta0 = p.optional_number("theta0");
    p.finish();
    auto inst = guarded([&] { return std::make_unique<instances::TiltedCoinInstance>(q); });
    out.sensitivity = SensitivityParams{inst->epsilon(), q.M, q.gamma, 1.0, 1.0, std::nullopt};
    out.problem = std::move(inst);
  } else {
    throw ConfigError(fmt::format("unknown instance '{}'", name), "experiment.instance");
  }
  return out;
}

bool ExperimentResult::passed() const {
  for (const auto& m : methods)
    if (m.overlay && !m.overlay->passed) return false;
  return true;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::optional<std::size_t> workers) {
  BuiltInstance built = build_instance(cfg);
  const std::size_t w = resolve_workers(workers ? *workers : cfg.workers);
  ExperimentResult result;
  result.instance = cfg.instance;

  if (cfg.overlay) {
    if (!built.sensitivity)
      throw ConfigError(fmt::format("instance '{}' has no rate curve", cfg.instance), "overlay");
    const double factor = guarded([&] { return instances::rate_factor(cfg.overlay->rate, *built.sensitivity); });
    result.overlay_label = fmt::format("{} = {:.6g}^t", rate_formula(cfg.overlay->rate), factor);
    result.overlay_curve = guarded([&] { return instances::rate_curve(cfg.overlay->rate, *built.sensitivity, cfg.iterations); });
  }

  double overlay_scale = 0.0;
  std::vector<std::string> seen;
  for (const Method& method : cfg.methods) {
    MethodResult mr;
    mr.label = method.label();
    std::size_t dup = 1;
    for (const auto& s : seen) dup += s == method.label() || s.rfind(method.label() + "_", 0) == 0;
    if (dup > 1) mr.label += fmt::format("_{}", dup);
    seen.push_back(mr.label);

    const auto start = std::chrono::steady_clock::now();
    if (built.market) {
      rideshare::GameOptions go;
      go.iterations = cfg.iterations;
      go.runs = cfg.runs;
      go.seed = cfg.seed;
      go.n_demand = built.n_demand;
      go.order = built.order;
      go.workers = w;
      rideshare::GameResult game = rideshare::game_loop(*built.market, {method, method}, go);
      mr.traces = std::move(game.players[0]);
      mr.opponent = std::move(game.players[1]);
    } else {
      RunOptions ro;
      ro.iterations = cfg.iterations;
      ro.runs = cfg.runs;
      ro.seed = cfg.seed;
      ro.mode = cfg.mode;
      ro.solver = cfg.solver;
      ro.metrics = cfg.metrics;
      ro.workers = w;
      mr.traces = run_dynamics(*built.problem, method, ro);
    }
    mr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    mr.aggregate = metrics::aggregate(mr.traces);

    if (cfg.stable_tol) {
      std::size_t n = 0;
      for (const auto& tr : mr.traces) n += detect_stable(tr, *cfg.stable_tol).has_value();
      mr.runs_stable = n;
    }

    if (cfg.overlay) {
      std::vector<double> dists;
      for (const auto& row : mr.aggregate) dists.push_back(row.dist_to_ps.mean);
      if (overlay_scale == 0.0) {
        if (cfg.overlay->scale == "tail_constant") {
          if (!built.tail_constant) throw ConfigError("tail_constant needs a lower-bound instance", "overlay.scale");
          overlay_scale = *built.tail_constant;
        } else if (cfg.overlay->scale == "initial_distance") {
          overlay_scale = dists.front();
        } else {
          overlay_scale = std::stod(cfg.overlay->scale);
        }
        if (!std::isfinite(overlay_scale))
          throw ConfigError("the overlay needs distances to a known stable point", "overlay.scale");
        for (double& c : result.overlay_curve) c *= overlay_scale;
      }
      mr.overlay = metrics::overlay_check(dists, result.overlay_curve, cfg.overlay->direction, cfg.overlay->slack);
    }
    result.methods.push_back(std::move(mr));
  }
  return result;
}

std::string aggregate_csv(const ExperimentResult& result, bool with_median) {
  std::vector<metrics::LabeledAggregate> labeled;
  for (const auto& m : result.methods) labeled.push_back({m.label, m.aggregate});
  std::ostringstream out;
  metrics::write_aggregate_csv(out, labeled, with_median);
  return out.str();
}

}  // namespace perfdyn::harness
