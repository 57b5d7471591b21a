#include "perfdyn/minimizers/dataset.hpp"

#include <cstring>
#include <map>
#include <string>

#include "perfdyn/core/errors.hpp"

namespace perfdyn {

Dataset Dataset::uniform(Matrix x, Vector y) {
  const Eigen::Index n = x.rows();
  if (n == 0) throw InvalidInput("dataset must contain at least one row");
  if (y.size() != 0 && y.size() != n) throw InvalidInput("label count differs from row count");
  Dataset d;
  d.x = std::move(x);
  d.y = std::move(y);
  d.w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  return d;
}

Vector Dataset::weighted_mean() const { return x.transpose() * w; }

Dataset Dataset::pool(std::span<const Dataset* const> parts, std::span<const double> weights) {
  if (parts.size() != weights.size() || parts.empty()) throw InvalidInput("pool needs one weight per part");
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts.front()->x.cols();
  const bool labeled = parts.front()->has_labels();
  for (const Dataset* p : parts) {
    if (p->x.cols() != cols || p->has_labels() != labeled) throw InvalidInput("pooled datasets differ in shape");
    rows += p->size();
  }
  Dataset out;
  out.x.resize(rows, cols);
  out.w.resize(rows);
  if (labeled) out.y.resize(rows);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Dataset& p = *parts[i];
    out.x.middleRows(at, p.size()) = p.x;
    out.w.segment(at, p.size()) = weights[i] * p.w;
    if (labeled) out.y.segment(at, p.size()) = p.y;
    at += p.size();
  }
  return out;
}

Dataset Dataset::consolidated() const {
  const Eigen::Index cols = x.cols();
  std::map<std::string, Eigen::Index> index;
  std::vector<Eigen::Index> first;
  std::vector<double> weight;
  std::string k(static_cast<std::size_t>(cols + 1) * sizeof(double), '\0');
  for (Eigen::Index i = 0; i < size(); ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) std::memcpy(k.data() + j * sizeof(double), &x(i, j), sizeof(double));
    const double label = has_labels() ? y[i] : 0.0;
    std::memcpy(k.data() + cols * sizeof(double), &label, sizeof(double));
    auto [it, inserted] = index.emplace(k, static_cast<Eigen::Index>(first.size()));
    if (inserted) {
      first.push_back(i);
      weight.push_back(w[i]);
    } else {
      weight[static_cast<std::size_t>(it->second)] += w[i];
    }
  }
  Dataset out;
  const auto m = static_cast<Eigen::Index>(first.size());
  out.x.resize(m, cols);
  out.w.resize(m);
  if (has_labels()) out.y.resize(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    out.x.row(r) = x.row(first[static_cast<std::size_t>(r)]);
    out.w[r] = weight[static_cast<std::size_t>(r)];
    if (has_labels()) out.y[r] = y[first[static_cast<std::size_t>(r)]];
  }
  return out;
}

}  // namespace perfdyn
