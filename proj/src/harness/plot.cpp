#include "perfdyn/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/harness/bundle.hpp"

namespace perfdyn::harness {

namespace {

constexpr double kWidth = 760, kHeight = 460;
constexpr double kLeft = 80, kRight = 200, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool usable(double v, bool log_y) { return std::isfinite(v) && (!log_y || v > 0.0); }

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) ticks.push_back(t);
  return ticks;
}

}  // namespace

std::string render_svg(const Figure& fig) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : fig.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i], fig.log_y)) continue;
      const double y = fig.log_y ? std::log10(s.y[i]) : s.y[i];
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymin -= fig.log_y ? 0.5 : std::max(1e-12, std::abs(ymin) * 0.1);
    ymax += fig.log_y ? 0.5 : std::max(1e-12, std::abs(ymax) * 0.1);
  }
  if (fig.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
  svg += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", kLeft + pw / 2,
                     escape(fig.title));
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                     kTop, pw, ph);

  for (double t : linear_ticks(xmin, xmax)) {
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>\n", px(t),
                       kTop + ph, kTop + ph + 5);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:g}</text>\n", px(t), kTop + ph + 18, t);
  }
  std::vector<double> yt;
  if (fig.log_y) {
    const int step = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / 8.0)));
    for (double e = ymin; e <= ymax + 1e-9; e += step) yt.push_back(e);
  } else {
    yt = linear_ticks(ymin, ymax);
  }
  for (double t : yt) {
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#dddddd\"/>\n", kLeft, py(t),
                       kLeft + pw);
    const std::string label = fig.log_y ? fmt::format("1e{:g}", t) : fmt::format("{:.4g}", t);
    svg += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, py(t) + 4, label);
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2, kHeight - 16,
                     escape(fig.x_label));
  svg += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                     kTop + ph / 2, escape(fig.y_label + (fig.log_y ? " (log scale)" : "")));

  for (std::size_t k = 0; k < fig.series.size(); ++k) {
    const Series& s = fig.series[k];
    const std::string color = s.dotted ? "black" : kPalette[k % std::size(kPalette)];
    const std::string dash = s.dotted ? " stroke-dasharray=\"3,4\"" : "";
    std::string points;
    auto flush = [&] {
      if (!points.empty())
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{} points=\"{}\"/>\n", color,
                           dash, points);
      points.clear();
    };
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i], fig.log_y)) {
        flush();
        continue;
      }
      const double y = fig.log_y ? std::log10(s.y[i]) : s.y[i];
      points += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(y));
    }
    flush();
    const double ly = kTop + 12 + 20.0 * static_cast<double>(k);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"{4}/>\n",
                       kLeft + pw + 12, ly, kLeft + pw + 36, color, dash);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kLeft + pw + 42, ly + 4, escape(s.label));
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::filesystem::path> plot_bundle(const std::filesystem::path& bundle) {
  if (!std::filesystem::is_directory(bundle)) throw InvalidInput("no bundle at " + bundle.string());
  const AggregateTable table = read_aggregate_csv(bundle / "aggregate.csv");
  for (const char* col : {"t", "dist_to_ps_mean", "loss_shift_mean", "perf_risk_mean"})
    if (!table.has_column(col)) throw InvalidInput(fmt::format("aggregate.csv is missing column '{}'", col));
  const BundleOverlay overlay = read_bundle_overlay(bundle);

  auto figure = [&](const std::string& column, const std::string& title, const std::string& y_label, bool want_log) {
    Figure fig;
    fig.title = title;
    fig.x_label = "iteration t";
    fig.y_label = y_label;
    bool any = false, all_positive = true;
    for (const auto& m : table.methods) {
      Series s{m, table.column(m, "t"), table.column(m, column), false};
      for (double v : s.y) {
        if (!std::isfinite(v)) continue;
        any = true;
        all_positive = all_positive && v > 0.0;
      }
      fig.series.push_back(std::move(s));
    }
    fig.log_y = want_log && all_positive;
    return std::make_pair(fig, any);
  };

  std::vector<std::filesystem::path> written;
  auto emit = [&](const Figure& fig, const std::string& name) {
    const auto path = bundle / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << render_svg(fig);
    written.push_back(path);
  };

  if (auto [fig, any] = figure("dist_to_ps_mean", "Distance to the stable point", "mean ||θ_t − θ_PS||", true); any) {
    if (!overlay.curve.empty()) {
      Series s{"bound " + overlay.label, {}, overlay.curve, true};
      for (std::size_t t = 0; t < overlay.curve.size(); ++t) s.x.push_back(static_cast<double>(t));
      fig.series.push_back(std::move(s));
    }
    emit(fig, "distance.svg");
  }
  if (auto [fig, any] = figure("loss_shift_mean", "Loss shift due to performativity", "mean ΔR_t", true); any)
    emit(fig, "loss_shift.svg");
  if (auto [fig, any] = figure("perf_risk_mean", "Performative risk", "mean PR(θ_t)", true); any)
    emit(fig, "perf_risk.svg");
  if (written.empty()) throw InvalidInput("aggregate.csv has no finite values to plot");
  return written;
}

}  // namespace perfdyn::harness
