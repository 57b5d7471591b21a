#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/harness/bundle.hpp"
#include "perfdyn/harness/config.hpp"
#include "perfdyn/harness/experiment.hpp"
#include "perfdyn/harness/lowerbound.hpp"
#include "perfdyn/harness/plot.hpp"

using namespace perfdyn;
using namespace perfdyn::harness;

namespace {

const std::string kLowerBound = R"(seed = 1
[experiment]
instance = "perdomo_lowerbound"
iterations = 20
[instance]
epsilon = 2.49
beta = 1.0
gamma = 5.0
d = 40
[[method]]
kind = "rrm"
[[method]]
kind = "arm"
schedule = "window"
tau = 2
[overlay]
rate = "perdomo_arm_lower"
direction = "lower"
slack = 0.9
scale = "tail_constant"
)";

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("perfdyn_bundle_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ConfigError";
  return ConfigError("none");
}

}  // namespace

TEST(Config, ParsesBundledShape) {
  const auto cfg = parse_config(kLowerBound);
  EXPECT_EQ(cfg.instance, "perdomo_lowerbound");
  EXPECT_EQ(cfg.iterations, 20u);
  ASSERT_EQ(cfg.methods.size(), 2u);
  EXPECT_EQ(cfg.methods[1].schedule.tau(), 2u);
  ASSERT_TRUE(cfg.overlay.has_value());
  EXPECT_EQ(cfg.overlay->scale, "tail_constant");
  EXPECT_EQ(cfg.source, kLowerBound);
}

TEST(Config, EmptyMethodListIsRejected) {
  const auto e = config_error("seed = 0\n[experiment]\ninstance = \"perdomo_tightness\"\n");
  EXPECT_EQ(e.key(), "method");
}

TEST(Config, UnknownKeyReportsKeyAndLine) {
  const auto e = config_error("seed = 0\n[experiment]\ninstance = \"perdomo_tightness\"\nitrations = 3\n[[method]]\n"
                              "kind = \"rrm\"\n");
  EXPECT_EQ(e.key(), "experiment.itrations");
  EXPECT_EQ(e.line(), 4u);
}

TEST(Config, UnknownInstanceKeyIsRejectedWhenBuilt) {
  const auto cfg = parse_config("seed = 0\n[experiment]\ninstance = \"perdomo_tightness\"\n[instance]\nepsilonn = 1\n"
                                "[[method]]\nkind = \"rrm\"\n");
  try {
    build_instance(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "instance.epsilonn");
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(Config, TypeAndRangeErrors) {
  EXPECT_THROW(parse_config("[experiment]\ninstance = \"perdomo_tightness\"\n[[method]]\nkind = \"rrm\"\n"),
               ConfigError);
  EXPECT_THROW(parse_config("seed = 0\n[experiment]\ninstance = \"nope\"\n[[method]]\nkind = \"rrm\"\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = 0\n[experiment]\ninstance = \"perdomo_tightness\"\niterations = \"x\"\n"
                            "[[method]]\nkind = \"rrm\"\n"),
               ConfigError);
  EXPECT_THROW(parse_config("seed = 0\n[experiment]\ninstance = \"perdomo_tightness\"\n[[method]]\nkind = \"arm\"\n"
                            "schedule = \"window\"\ntau = 0\n"),
               ConfigError);
  EXPECT_THROW(parse_config("seed = 0\n[experiment\n"), ConfigError);
}

TEST(Experiment, LowerBoundOverlayPasses) {
  const auto r = run_experiment(parse_config(kLowerBound), 1);
  EXPECT_TRUE(r.passed());
  EXPECT_NE(r.overlay_label.find("0.249^t"), std::string::npos);
}

TEST(Experiment, WorkerEnvOverride) {
  setenv("PERFDYN_WORKERS", "3", 1);
  EXPECT_EQ(resolve_workers(1), 3u);
  unsetenv("PERFDYN_WORKERS");
  EXPECT_EQ(resolve_workers(2), 2u);
}

TEST(Bundle, WriteReadPlotAndCheck) {
  const auto cfg = parse_config(kLowerBound);
  const auto result = run_experiment(cfg, 1);
  const auto dir = scratch("lowerbound");
  write_bundle(cfg, result, dir);
  EXPECT_EQ(slurp(dir / "config.toml"), kLowerBound);
  EXPECT_EQ(slurp(dir / "aggregate.csv"), aggregate_csv(result, false));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));

  const auto table = read_aggregate_csv(dir / "aggregate.csv");
  ASSERT_EQ(table.methods.size(), 2u);
  EXPECT_EQ(table.column(table.methods[0], "dist_to_ps_mean").size(), 21u);
  EXPECT_THROW(table.column(table.methods[0], "missing"), InvalidInput);
  EXPECT_EQ(read_bundle_overlay(dir).curve.size(), 21u);

  const auto files = plot_bundle(dir);
  EXPECT_EQ(files.size(), 3u);
  const std::string svg = slurp(dir / "distance.svg");
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(svg.find("0.249^t"), std::string::npos);

  EXPECT_TRUE(lowerbound_check(dir, Framework::perdomo, 0.9).passed());
  EXPECT_THROW(lowerbound_check(dir, Framework::mofakhami, 0.9), ConfigError);

  // Re-running from the echoed config reproduces the bundle.
  const auto again = run_experiment(load_config(dir / "config.toml"), 2);
  EXPECT_EQ(aggregate_csv(again, false), slurp(dir / "aggregate.csv"));
}

TEST(Plot, SingleSeriesAndLogAxis) {
  Figure f{"t", "x", "y", true, {{"a", {0, 1, 2}, {1.0, 0.1, 0.0}, false}}};
  const std::string svg = render_svg(f);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_EQ(svg.find("stroke-dasharray"), std::string::npos);
}
