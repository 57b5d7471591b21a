#include "perfdyn/harness/bundle.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/harness/experiment.hpp"

namespace perfdyn::harness {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string direction_name(metrics::Direction d) { return d == metrics::Direction::lower ? "lower" : "upper"; }

double window_or_nan(const std::vector<metrics::AggregateRow>& rows, std::size_t lo, std::size_t hi,
                     metrics::ColumnStats metrics::AggregateRow::*col) {
  if (rows.size() <= lo) return NAN;
  return metrics::window_mean(rows, lo, std::min(hi, rows.size() - 1), col);
}

}  // namespace

void write_bundle(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "traces");
  write_text(dir / "config.toml", cfg.source);
  for (const auto& m : result.methods) {
    std::ostringstream trace;
    write_trace_csv(trace, m.traces);
    write_text(dir / "traces" / (m.label + ".csv"), trace.str());
    if (!m.opponent.empty()) {
      std::ostringstream opp;
      write_trace_csv(opp, m.opponent);
      write_text(dir / "traces" / (m.label + "_player2.csv"), opp.str());
    }
  }
  write_text(dir / "aggregate.csv", aggregate_csv(result, cfg.median));

  nlohmann::json report;
  report["instance"] = result.instance;
  report["seed"] = cfg.seed;
  report["iterations"] = cfg.iterations;
  report["runs"] = cfg.runs;
  report["mode"] = cfg.mode.kind == ModeKind::exact ? "exact" : "empirical";
  report["passed"] = result.passed();
  nlohmann::json methods = nlohmann::json::array();
  const std::size_t T = cfg.iterations;
  for (const auto& m : result.methods) {
    nlohmann::json j;
    j["label"] = m.label;
    j["seconds"] = m.seconds;
    const auto& last = m.aggregate.back();
    j["final_dist_to_ps"] = number(last.dist_to_ps.mean);
    j["final_perf_risk"] = number(last.perf_risk.mean);
    j["loss_shift_mean_all"] = number(window_or_nan(m.aggregate, 1, T, &metrics::AggregateRow::loss_shift));
    j["loss_shift_mean_second_half"] =
        number(window_or_nan(m.aggregate, T / 2, T, &metrics::AggregateRow::loss_shift));
    if (m.runs_stable) j["runs_stable"] = *m.runs_stable;
    if (m.overlay) {
      j["overlay"] = {{"passed", m.overlay->passed},
                      {"worst_ratio", number(m.overlay->worst_ratio)},
                      {"worst_t", m.overlay->worst_t},
                      {"direction", direction_name(m.overlay->direction)},
                      {"slack", m.overlay->slack}};
    }
    methods.push_back(std::move(j));
  }
  report["methods"] = std::move(methods);
  if (cfg.overlay) {
    nlohmann::json curve = nlohmann::json::array();
    for (double c : result.overlay_curve) curve.push_back(number(c));
    report["overlay"] = {{"label", result.overlay_label},
                         {"rate", rate_kind_name(cfg.overlay->rate)},
                         {"direction", direction_name(cfg.overlay->direction)},
                         {"slack", cfg.overlay->slack},
                         {"scale", cfg.overlay->scale},
                         {"curve", std::move(curve)}};
  }
  write_text(dir / "report.json", report.dump(2) + "\n");
}

const std::vector<double>& AggregateTable::column(const std::string& method, const std::string& name) const {
  const auto m = data.find(method);
  if (m == data.end()) throw InvalidInput(fmt::format("aggregate has no method '{}'", method));
  const auto c = m->second.find(name);
  if (c == m->second.end()) throw InvalidInput(fmt::format("aggregate is missing column '{}'", name));
  return c->second;
}

bool AggregateTable::has_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

AggregateTable read_aggregate_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path.string());
  AggregateTable table;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path.string() + " is empty");
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  }
  if (table.columns.empty() || table.columns.front() != "method")
    throw InvalidInput(path.string() + ": first column must be 'method'");
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> values;
    while (std::getline(cells, cell, ',')) values.push_back(cell);
    if (values.size() != table.columns.size())
      throw InvalidInput(fmt::format("{}: row {} has {} fields, expected {}", path.string(), row, values.size(),
                                     table.columns.size()));
    const std::string& method = values.front();
    if (!table.data.count(method)) table.methods.push_back(method);
    auto& cols = table.data[method];
    for (std::size_t j = 1; j < values.size(); ++j) {
      double v = NAN;
      if (values[j] != "nan") {
        try {
          v = std::stod(values[j]);
        } catch (const std::exception&) {
          throw InvalidInput(fmt::format("{}: row {} column '{}' is not a number", path.string(), row,
                                         table.columns[j]));
        }
      }
      cols[table.columns[j]].push_back(v);
    }
  }
  return table;
}

BundleOverlay read_bundle_overlay(const std::filesystem::path& bundle) {
  BundleOverlay out;
  std::ifstream in(bundle / "report.json");
  if (!in) return out;
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("report.json: " + std::string(e.what()));
  }
  if (!report.contains("overlay")) return out;
  const auto& ov = report["overlay"];
  out.label = ov.value("label", std::string());
  for (const auto& v : ov["curve"]) out.curve.push_back(v.is_number() ? v.get<double>() : NAN);
  return out;
}

}  // namespace perfdyn::harness
