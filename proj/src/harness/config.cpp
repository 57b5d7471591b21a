#include "perfdyn/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <toml.hpp>

#include "perfdyn/core/errors.hpp"

namespace perfdyn::harness {

namespace {

std::optional<std::size_t> line_of(const toml::node& node) {
  const auto& src = node.source();
  if (src.begin.line == 0) return std::nullopt;
  return static_cast<std::size_t>(src.begin.line);
}

std::string joined(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

ParamEntry convert(const toml::node& node, const std::string& path) {
  const auto line = line_of(node);
  if (auto v = node.value<bool>(); v && node.is_boolean()) return {*v, line};
  if (node.is_integer()) return {*node.value<std::int64_t>(), line};
  if (node.is_floating_point()) return {*node.value<double>(), line};
  if (node.is_string()) return {*node.value<std::string>(), line};
  if (const toml::array* arr = node.as_array()) {
    std::vector<double> out;
    for (const toml::node& item : *arr) {
      if (!item.is_number()) throw ConfigError("arrays may only hold numbers", path, line_of(item));
      out.push_back(*item.value<double>());
    }
    return {out, line};
  }
  throw ConfigError("unsupported value type", path, line);
}

ParamMap table_params(const toml::table* table, const std::string& prefix) {
  std::map<std::string, ParamEntry> entries;
  if (table) {
    for (const auto& [k, node] : *table) {
      const std::string key(k.str());
      if (node.is_table()) throw ConfigError("nested tables are not allowed here", joined(prefix, key), line_of(node));
      entries.emplace(key, convert(node, joined(prefix, key)));
    }
  }
  return ParamMap(prefix, std::move(entries));
}

const toml::table* subtable(const toml::table& root, const std::string& name) {
  const toml::node* node = root.get(name);
  if (!node) return nullptr;
  if (!node->is_table()) throw ConfigError("expected a table", name, line_of(*node));
  return node->as_table();
}

Method parse_method(const ParamMap& m, const std::string& path) {
  const std::string kind = m.text("kind", "");
  Method out;
  if (kind == "rrm") {
    out = Method::rrm();
  } else if (kind == "rgd") {
    out = Method::rgd(m.number("eta", 0.1));
  } else if (kind == "arm") {
    const std::string schedule = m.text("schedule", "window");
    try {
      if (schedule == "window") {
        out = Method::arm(AggregationSchedule::window(m.count("tau", 1)));
      } else if (schedule == "half") {
        out = Method::arm(AggregationSchedule::half_history());
      } else if (schedule == "all") {
        out = Method::arm(AggregationSchedule::all());
      } else if (schedule == "explicit") {
        out = Method::arm(AggregationSchedule::explicit_weights(m.numbers("weights", {})));
      } else {
        throw ConfigError(fmt::format("unknown schedule '{}' (window, half, all, explicit)", schedule),
                          path + ".schedule", m.entries().count("schedule") ? m.entries().at("schedule").line
                                                                            : std::nullopt);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what(), path);
    }
  } else {
    const auto it = m.entries().find("kind");
    throw ConfigError(fmt::format("unknown method kind '{}' (rrm, rgd, arm)", kind), path + ".kind",
                      it == m.entries().end() ? std::nullopt : it->second.line);
  }
  m.finish();
  return out;
}

instances::RateKind parse_rate(const std::string& name, const ParamMap& m) {
  using instances::RateKind;
  for (RateKind k : {RateKind::perdomo_upper, RateKind::perdomo_arm_lower, RateKind::mofakhami_upper,
                     RateKind::mofakhami_lower, RateKind::arm_upper})
    if (rate_kind_name(k) == name) return k;
  const auto it = m.entries().find("rate");
  throw ConfigError(fmt::format("unknown rate '{}'", name), "overlay.rate",
                    it == m.entries().end() ? std::nullopt : it->second.line);
}

}  // namespace

const ParamEntry* ParamMap::find(const std::string& key) const {
  used_.insert(key);
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void ParamMap::fail(const std::string& key, const std::string& what) const {
  const auto it = entries_.find(key);
  throw ConfigError(what, joined(prefix_, key), it == entries_.end() ? std::nullopt : it->second.line);
}

double ParamMap::number(const std::string& key, double fallback) const {
  const auto v = optional_number(key);
  return v ? *v : fallback;
}

std::optional<double> ParamMap::optional_number(const std::string& key) const {
  const ParamEntry* e = find(key);
  if (!e) return std::nullopt;
  if (const auto* d = std::get_if<double>(&e->value)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&e->value)) return static_cast<double>(*i);
  fail(key, "expected a number");
}

std::int64_t ParamMap::integer(const std::string& key, std::int64_t fallback) const {
  const ParamEntry* e = find(key);
  if (!e) return fallback;
  if (const auto* i = std::get_if<std::int64_t>(&e->value)) return *i;
  fail(key, "expected an integer");
}

std::size_t ParamMap::count(const std::string& key, std::size_t fallback) const {
  const std::int64_t v = integer(key, static_cast<std::int64_t>(fallback));
  if (v < 0) fail(key, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool ParamMap::flag(const std::string& key, bool fallback) const {
  const ParamEntry* e = find(key);
  if (!e) return fallback;
  if (const auto* b = std::get_if<bool>(&e->value)) return *b;
  fail(key, "expected true or false");
}

std::string ParamMap::text(const std::string& key, const std::string& fallback) const {
  const ParamEntry* e = find(key);
  if (!e) return fallback;
  if (const auto* s = std::get_if<std::string>(&e->value)) return *s;
  fail(key, "expected a string");
}

std::vector<double> ParamMap::numbers(const std::string& key, const std::vector<double>& fallback) const {
  const ParamEntry* e = find(key);
  if (!e) return fallback;
  if (const auto* v = std::get_if<std::vector<double>>(&e->value)) return *v;
  fail(key, "expected an array of numbers");
}

void ParamMap::finish() const {
  for (const auto& [key, entry] : entries_)
    if (!used_.count(key)) throw ConfigError("unknown key", joined(prefix_, key), entry.line);
}

const std::vector<std::string>& known_instances() {
  static const std::vector<std::string> names = {"perdomo_tightness",    "mofakhami_tightness", "perdomo_lowerbound",
                                                 "mofakhami_lowerbound", "tilted_coin",         "credit",
                                                 "rideshare"};
  return names;
}

std::string rate_kind_name(instances::RateKind kind) {
  using instances::RateKind;
  switch (kind) {
    case RateKind::perdomo_upper:
      return "perdomo_upper";
    case RateKind::perdomo_arm_lower:
      return "perdomo_arm_lower";
    case RateKind::mofakhami_upper:
      return "mofakhami_upper";
    case RateKind::mofakhami_lower:
      return "mofakhami_lower";
    case RateKind::arm_upper:
      return "arm_upper";
  }
  return "unknown";
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& origin) {
  toml::table root;
  try {
    root = toml::parse(text, origin.string());
  } catch (const toml::parse_error& e) {
    throw ConfigError(std::string(e.description()), "", static_cast<std::size_t>(e.source().begin.line));
  }

  ExperimentConfig cfg;
  cfg.source = text;
  cfg.origin = origin;

  for (const auto& [k, node] : root) {
    const std::string key(k.str());
    static const std::set<std::string> allowed = {"seed",   "output", "experiment", "instance",
                                                  "method", "solver", "metrics",    "overlay"};
    if (!allowed.count(key)) throw ConfigError("unknown key", key, line_of(node));
  }

  const toml::node* seed = root.get("seed");
  if (!seed) throw ConfigError("a seed is required", "seed");
  if (!seed->is_integer() || *seed->value<std::int64_t>() < 0)
    throw ConfigError("seed must be a nonnegative integer", "seed", line_of(*seed));
  cfg.seed = static_cast<std::uint64_t>(*seed->value<std::int64_t>());
  if (const toml::node* out = root.get("output")) {
    if (!out->is_string()) throw ConfigError("output must be a string", "output", line_of(*out));
    cfg.output = std::filesystem::path(*out->value<std::string>());
  }

  const ParamMap exp = table_params(subtable(root, "experiment"), "experiment");
  cfg.instance = exp.text("instance", "");
  bool known = false;
  for (const auto& n : known_instances()) known = known || n == cfg.instance;
  if (!known) {
    const auto it = exp.entries().find("instance");
    std::string list;
    for (const auto& n : known_instances()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError(fmt::format("unknown instance '{}' (known: {})", cfg.instance, list), "experiment.instance",
                      it == exp.entries().end() ? std::nullopt : it->second.line);
  }
  cfg.iterations = exp.count("iterations", 1);
  cfg.runs = exp.count("runs", 1);
  cfg.workers = exp.count("workers", 0);
  if (cfg.iterations < 1) throw ConfigError("iterations must be >= 1", "experiment.iterations");
  if (cfg.runs < 1) throw ConfigError("runs must be >= 1", "experiment.runs");
  const std::string mode = exp.text("mode", "exact");
  if (mode == "exact") {
    cfg.mode = DataMode::exact();
    if (exp.has("samples")) exp.count("samples", 0);
  } else if (mode == "empirical") {
    const std::size_t n = exp.count("samples", 1000);
    if (n < 1) throw ConfigError("samples must be >= 1", "experiment.samples");
    cfg.mode = DataMode::empirical(n);
  } else {
    throw ConfigError(fmt::format("unknown mode '{}' (exact, empirical)", mode), "experiment.mode",
                      exp.entries().at("mode").line);
  }
  exp.finish();

  cfg.params = table_params(subtable(root, "instance"), "instance");

  if (const toml::node* methods = root.get("method")) {
    const toml::array* arr = methods->as_array();
    if (!arr || !arr->is_array_of_tables())
      throw ConfigError("method must be an array of tables ([[method]])", "method", line_of(*methods));
    std::size_t i = 0;
    for (const toml::node& node : *arr) {
      const std::string path = fmt::format("method[{}]", i++);
      cfg.methods.push_back(parse_method(table_params(node.as_table(), path), path));
    }
  }
  if (cfg.methods.empty()) throw ConfigError("at least one [[method]] is required", "method");

  const ParamMap solver = table_params(subtable(root, "solver"), "solver");
  const std::string opt = solver.text("optimizer", "gd");
  if (opt == "gd") {
    cfg.solver.optimizer = Optimizer::gradient_descent;
  } else if (opt == "adam") {
    cfg.solver.optimizer = Optimizer::adam;
  } else {
    throw ConfigError(fmt::format("unknown optimizer '{}' (gd, adam)", opt), "solver.optimizer",
                      solver.entries().at("optimizer").line);
  }
  cfg.solver.lr = solver.number("lr", cfg.solver.lr);
  cfg.solver.max_iters = solver.count("max_iters", cfg.solver.max_iters);
  cfg.solver.grad_tol = solver.number("grad_tol", cfg.solver.grad_tol);
  cfg.solver.fail_on_max_iters = solver.flag("fail_on_max_iters", cfg.solver.fail_on_max_iters);
  cfg.solver.use_closed_form = solver.flag("closed_form", cfg.solver.use_closed_form);
  if (!(cfg.solver.lr > 0.0)) throw ConfigError("lr must be positive", "solver.lr");
  solver.finish();

  const ParamMap met = table_params(subtable(root, "metrics"), "metrics");
  cfg.metrics.enabled = met.flag("enabled", true);
  const std::string mmode = met.text("mode", "auto");
  if (mmode == "auto") {
    cfg.metrics.mode = MetricMode::automatic;
  } else if (mmode == "exact") {
    cfg.metrics.mode = MetricMode::exact;
  } else if (mmode == "sampled") {
    cfg.metrics.mode = MetricMode::sampled;
  } else {
    throw ConfigError(fmt::format("unknown metric mode '{}' (auto, exact, sampled)", mmode), "metrics.mode",
                      met.entries().at("mode").line);
  }
  cfg.metrics.n_eval = met.count("n_eval", cfg.metrics.n_eval);
  if (cfg.metrics.n_eval < 1) throw ConfigError("n_eval must be >= 1", "metrics.n_eval");
  cfg.median = met.flag("median", false);
  cfg.stable_tol = met.optional_number("stable_tol");
  met.finish();

  if (const toml::table* ov = subtable(root, "overlay")) {
    const ParamMap o = table_params(ov, "overlay");
    OverlayConfig oc;
    oc.rate = parse_rate(o.text("rate", rate_kind_name(oc.rate)), o);
    const std::string dir = o.text("direction", "lower");
    if (dir == "lower") {
      oc.direction = metrics::Direction::lower;
    } else if (dir == "upper") {
      oc.direction = metrics::Direction::upper;
    } else {
      throw ConfigError("direction must be 'lower' or 'upper'", "overlay.direction", o.entries().at("direction").line);
    }
    oc.slack = o.number("slack", oc.slack);
    if (!(oc.slack > 0.0)) throw ConfigError("slack must be positive", "overlay.slack");
    if (o.has("scale")) {
      const ParamEntry& e = o.entries().at("scale");
      if (std::holds_alternative<std::string>(e.value)) {
        oc.scale = o.text("scale", oc.scale);
        if (oc.scale != "tail_constant" && oc.scale != "initial_distance")
          throw ConfigError("scale must be 'tail_constant', 'initial_distance' or a number", "overlay.scale", e.line);
      } else {
        const double s = o.number("scale", 1.0);
        if (!(s > 0.0)) throw ConfigError("scale must be positive", "overlay.scale", e.line);
        oc.scale = fmt::format("{:.17g}", s);
      }
    }
    o.finish();
    cfg.overlay = oc;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

}  // namespace perfdyn::harness
