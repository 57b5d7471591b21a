#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/harness/experiment.hpp"
#include "perfdyn/harness/lowerbound.hpp"
#include "perfdyn/harness/plot.hpp"
#include "perfdyn/harness/suites.hpp"

namespace {

enum Exit { ok = 0, failed = 1, config_error = 2, runtime_error = 3 };

int report_error(const char* kind, const std::exception& e, int code) {
  nlohmann::json j = {{"error", kind}, {"message", e.what()}};
  if (const auto* c = dynamic_cast<const perfdyn::ConfigError*>(&e)) {
    if (!c->key().empty()) j["key"] = c->key();
    if (c->line()) j["line"] = *c->line();
  }
  if (const auto* r = dynamic_cast<const perfdyn::RunError*>(&e)) {
    j["run"] = r->run();
    j["iteration"] = r->iteration();
  }
  if (const auto* i = dynamic_cast<const perfdyn::IngestionError*>(&e); i && i->row()) j["row"] = *i->row();
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace perfdyn::harness;
  CLI::App app{"Simulate and verify performative retraining dynamics"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t workers = 0;
  bool with_plots = false;
  auto* run = app.add_subcommand("run", "run an experiment config and write a result bundle");
  run->add_option("config", config_path, "TOML experiment config")->required();
  run->add_option("--out", out_dir, "bundle directory (default: the config's output key)");
  run->add_option("--workers", workers, "worker threads (0 = all cores; PERFDYN_WORKERS overrides)");
  run->add_flag("--plot", with_plots, "also render SVG plots into the bundle");

  std::uint64_t seed = kValidationSeed;
  bool as_json = false;
  auto* validate = app.add_subcommand("validate", "run the lemma and certificate suites");
  validate->add_option("--seed", seed, "seed for the randomized suites");
  validate->add_flag("--json", as_json, "print the report as JSON");

  std::string bundle;
  auto* plot = app.add_subcommand("plot", "render SVG figures for a bundle");
  plot->add_option("bundle", bundle, "bundle directory")->required();

  std::string framework;
  double slack = 0.9;
  auto* lb = app.add_subcommand("lowerbound-check", "check a bundle's distances against the lower-bound curve");
  lb->add_option("bundle", bundle, "bundle directory")->required();
  lb->add_option("--framework", framework, "perdomo or mofakhami")
      ->required()
      ->check(CLI::IsMember({"perdomo", "mofakhami"}));
  lb->add_option("--slack", slack, "multiplicative slack on the bound")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (*run) {
      const ExperimentConfig cfg = load_config(config_path);
      std::filesystem::path dir = out_dir;
      if (dir.empty()) dir = cfg.output ? *cfg.output : std::filesystem::path("bundles") / std::filesystem::path(config_path).stem();
      const ExperimentResult result =
          run_experiment(cfg, run->count("--workers") ? std::optional<std::size_t>(workers) : std::nullopt);
      write_bundle(cfg, result, dir);
      if (with_plots) plot_bundle(dir);
      for (const auto& m : result.methods) {
        std::printf("%-16s %8.2fs", m.label.c_str(), m.seconds);
        if (m.overlay) std::printf("  overlay %s (worst ratio %.6g at t=%zu)", m.overlay->passed ? "PASS" : "FAIL",
                                   m.overlay->worst_ratio, m.overlay->worst_t);
        std::printf("\n");
      }
      std::printf("bundle written to %s\n", dir.string().c_str());
      return result.passed() ? ok : failed;
    }
    if (*validate) {
      const auto results = run_validation_suites(seed);
      bool all = true;
      for (const auto& r : results) all = all && (r.informational || r.passed);
      if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : results)
          j.push_back({{"suite", r.name},
                       {"status", r.informational ? "info" : (r.passed ? "pass" : "fail")},
                       {"checks", r.checks},
                       {"failures", r.failures},
                       {"seconds", r.seconds},
                       {"witness", r.witness}});
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << format_suites(results);
      }
      return all ? ok : failed;
    }
    if (*plot) {
      for (const auto& p : plot_bundle(bundle)) std::printf("%s\n", p.string().c_str());
      return ok;
    }
    if (*lb) {
      const auto report =
          lowerbound_check(bundle, framework == "perdomo" ? Framework::perdomo : Framework::mofakhami, slack);
      std::cout << format_report(report);
      return report.passed() ? ok : failed;
    }
  } catch (const perfdyn::ConfigError& e) {
    return report_error("config", e, config_error);
  } catch (const perfdyn::InvalidInput& e) {
    return report_error("invalid_input", e, config_error);
  } catch (const std::exception& e) {
    return report_error("runtime", e, runtime_error);
  }
  return ok;
}
