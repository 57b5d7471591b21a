#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/rir/credit.hpp"

namespace perfdyn::rir {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  const auto e = s.find_last_not_of(" \t\r\"");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "nan" || s == "NaN"; }

double parse_number(const std::string& s, std::size_t row) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v))
    throw IngestionError(fmt::format("row {}: '{}' is not a number", row, s), row);
  return v;
}

}  // namespace

CsvLoad load_credit_csv(const std::string& path, const std::vector<std::size_t>& strategic_indices,
                        std::size_t features, bool standardize) {
  FeatureSchema schema = FeatureSchema::make(features, strategic_indices);
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestionError(path + " has no header");
  const std::size_t width = features + 1;
  if (split_csv(line).size() != width)
    throw IngestionError(fmt::format("header has {} columns, expected {}", split_csv(line).size(), width), 0);

  CsvLoad out;
  std::vector<Vector> rows;
  std::vector<double> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv(line);
    if (cells.size() != width)
      throw IngestionError(fmt::format("row {}: {} columns, expected {}", row, cells.size(), width), row);
    for (auto& c : cells) c = trim(c);
    bool missing = false;
    for (const auto& c : cells) missing = missing || is_missing(c);
    if (missing) {
      ++out.dropped;
      out.dropped_rows.push_back(row);
      continue;
    }
    Vector x(static_cast<Eigen::Index>(features));
    for (std::size_t j = 0; j < features; ++j) x[static_cast<Eigen::Index>(j)] = parse_number(cells[j], row);
    const double y = parse_number(cells[features], row);
    if (y != 0.0 && y != 1.0) throw IngestionError(fmt::format("row {}: label {} is not 0 or 1", row, cells[features]), row);
    rows.push_back(std::move(x));
    labels.push_back(y);
  }
  if (rows.empty()) throw IngestionError(path + " has no complete rows");

  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix data(n, static_cast<Eigen::Index>(features));
  for (Eigen::Index i = 0; i < n; ++i) data.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  if (standardize) {
    const Eigen::RowVectorXd mean = data.colwise().mean();
    data.rowwise() -= mean;
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      const double sd = std::sqrt(data.col(j).squaredNorm() / static_cast<double>(n));
      if (sd > 0.0) data.col(j) /= sd;
    }
  }

  const auto ns = static_cast<Eigen::Index>(schema.strategic.size());
  const auto nf = static_cast<Eigen::Index>(schema.nonstrategic.size());
  Matrix xf(n, nf);
  std::vector<Vector> strategic_atoms;
  std::vector<double> strategic_counts;
  std::map<std::vector<double>, std::size_t> seen;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> key;
    for (std::size_t s : schema.strategic) key.push_back(data(i, static_cast<Eigen::Index>(s)));
    for (Eigen::Index j = 0; j < nf; ++j) xf(i, j) = data(i, static_cast<Eigen::Index>(schema.nonstrategic[static_cast<std::size_t>(j)]));
    auto [it, inserted] = seen.emplace(key, strategic_atoms.size());
    if (inserted) {
      strategic_atoms.push_back(Eigen::Map<const Vector>(key.data(), ns));
      strategic_counts.push_back(0.0);
    }
    strategic_counts[it->second] += 1.0;
  }
  const auto S = static_cast<Eigen::Index>(strategic_atoms.size());
  Matrix xs(S, ns);
  Vector ps(S);
  for (Eigen::Index s = 0; s < S; ++s) {
    xs.row(s) = strategic_atoms[static_cast<std::size_t>(s)].transpose();
    ps[s] = strategic_counts[static_cast<std::size_t>(s)] / static_cast<double>(n);
  }
  Matrix label(S, n);
  for (Eigen::Index f = 0; f < n; ++f) label.col(f).setConstant(labels[static_cast<std::size_t>(f)]);
  out.rows = static_cast<std::size_t>(n);
  out.base = std::make_shared<DiscreteBase>(std::move(schema), std::move(xs), std::move(ps), std::move(xf),
                                            Vector::Constant(n, 1.0 / static_cast<double>(n)), std::move(label));
  return out;
}

}  // namespace perfdyn::rir
