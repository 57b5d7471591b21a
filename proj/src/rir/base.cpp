#include "perfdyn/rir/base.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "perfdyn/core/errors.hpp"

namespace perfdyn::rir {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::vector<double> cumulative(const Vector& p) {
  std::vector<double> c(static_cast<std::size_t>(p.size()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) c[static_cast<std::size_t>(i)] = (s += p[i]);
  return c;
}

std::size_t categorical(const std::vector<double>& cum, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, cum.back())(rng);
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

void check_probs(const Vector& p, const char* what) {
  if (p.size() == 0 || (p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-9)
    throw InvalidInput(std::string(what) + " must be a probability vector");
}

Vector gather(const Vector& x, const std::vector<std::size_t>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[static_cast<Eigen::Index>(idx[i])];
  return out;
}

}  // namespace

FeatureSchema FeatureSchema::make(std::size_t total, std::vector<std::size_t> strategic) {
  if (total < 2) throw InvalidInput("schema needs at least two features");
  std::set<std::size_t> seen;
  for (std::size_t i : strategic) {
    if (i >= total) throw InvalidInput("strategic index out of range");
    if (!seen.insert(i).second) throw InvalidInput("duplicate strategic index");
  }
  if (seen.empty() || seen.size() == total)
    throw InvalidInput("strategic and non-strategic feature sets must both be non-empty");
  FeatureSchema s;
  s.total = total;
  s.strategic.assign(seen.begin(), seen.end());
  for (std::size_t i = 0; i < total; ++i)
    if (!seen.count(i)) s.nonstrategic.push_back(i);
  return s;
}

Vector FeatureSchema::assemble(const Vector& xs, const Vector& xf) const {
  if (static_cast<std::size_t>(xs.size()) != strategic.size() ||
      static_cast<std::size_t>(xf.size()) != nonstrategic.size())
    throw InvalidInput("feature block sizes do not match the schema");
  Vector x(static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < strategic.size(); ++i) x[static_cast<Eigen::Index>(strategic[i])] = xs[static_cast<Eigen::Index>(i)];
  for (std::size_t i = 0; i < nonstrategic.size(); ++i)
    x[static_cast<Eigen::Index>(nonstrategic[i])] = xf[static_cast<Eigen::Index>(i)];
  return x;
}

RejectionRule::RejectionRule(double d) : delta(d) {
  if (!(d > 0.0 && d < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
}

DiscreteBase::DiscreteBase(FeatureSchema schema, Matrix strategic_atoms, Vector strategic_probs,
                           Matrix nonstrategic_atoms, Vector nonstrategic_probs, Matrix label_prob)
    : schema_(std::move(schema)),
      xs_(std::move(strategic_atoms)),
      xf_(std::move(nonstrategic_atoms)),
      ps_(std::move(strategic_probs)),
      pf_(std::move(nonstrategic_probs)),
      label_(std::move(label_prob)) {
  check_probs(ps_, "strategic probabilities");
  check_probs(pf_, "non-strategic probabilities");
  if (xs_.rows() != ps_.size() || xf_.rows() != pf_.size()) throw InvalidInput("one probability per atom required");
  if (static_cast<std::size_t>(xs_.cols()) != schema_.strategic.size() ||
      static_cast<std::size_t>(xf_.cols()) != schema_.nonstrategic.size())
    throw InvalidInput("atom widths do not match the schema");
  if (label_.rows() != ps_.size() || label_.cols() != pf_.size())
    throw InvalidInput("label table must be strategic x non-strategic");
  if ((label_.array() < 0.0).any() || (label_.array() > 1.0).any())
    throw InvalidInput("label probabilities must lie in [0, 1]");
  const std::size_t S = strategic_count(), F = nonstrategic_count();
  features_.resize(static_cast<Eigen::Index>(S * F), static_cast<Eigen::Index>(schema_.total));
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t f = 0; f < F; ++f)
      features_.row(static_cast<Eigen::Index>(s * F + f)) =
          schema_.assemble(xs_.row(static_cast<Eigen::Index>(s)).transpose(), xf_.row(static_cast<Eigen::Index>(f)).transpose())
              .transpose();
  cum_s_ = cumulative(ps_);
  cum_f_ = cumulative(pf_);
}

std::size_t DiscreteBase::draw_strategic_index(Rng& rng) const { return categorical(cum_s_, rng); }

std::size_t DiscreteBase::draw_nonstrategic_index(Rng& rng) const { return categorical(cum_f_, rng); }

Vector DiscreteBase::draw_strategic(Rng& rng) const {
  return xs_.row(static_cast<Eigen::Index>(draw_strategic_index(rng))).transpose();
}

Vector DiscreteBase::draw_nonstrategic(Rng& rng) const {
  return xf_.row(static_cast<Eigen::Index>(draw_nonstrategic_index(rng))).transpose();
}

Vector DiscreteBase::base_probs() const {
  const std::size_t F = nonstrategic_count();
  Vector p(static_cast<Eigen::Index>(atom_count()));
  for (std::size_t s = 0; s < strategic_count(); ++s)
    for (std::size_t f = 0; f < F; ++f)
      p[static_cast<Eigen::Index>(s * F + f)] = ps_[static_cast<Eigen::Index>(s)] * pf_[static_cast<Eigen::Index>(f)];
  return p;
}

std::size_t DiscreteBase::locate(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != schema_.total) return atom_count();
  const Vector xs = gather(x, schema_.strategic);
  const Vector xf = gather(x, schema_.nonstrategic);
  std::size_t s = strategic_count(), f = nonstrategic_count();
  for (Eigen::Index i = 0; i < xs_.rows(); ++i)
    if (xs_.row(i).transpose() == xs) {
      s = static_cast<std::size_t>(i);
      break;
    }
  for (Eigen::Index i = 0; i < xf_.rows(); ++i)
    if (xf_.row(i).transpose() == xf) {
      f = static_cast<std::size_t>(i);
      break;
    }
  if (s == strategic_count() || f == nonstrategic_count()) return atom_count();
  return s * nonstrategic_count() + f;
}

double DiscreteBase::label_probability(const Vector& x) const {
  const std::size_t a = locate(x);
  if (a == atom_count()) throw InvalidInput("point is not an atom of the base distribution");
  const std::size_t F = nonstrategic_count();
  return label_(static_cast<Eigen::Index>(a / F), static_cast<Eigen::Index>(a % F));
}

GaussianBlockBase::GaussianBlockBase(FeatureSchema schema, Vector weights, double bias)
    : schema_(std::move(schema)), w_(std::move(weights)), bias_(bias) {
  if (static_cast<std::size_t>(w_.size()) != schema_.total) throw InvalidInput("one label weight per feature required");
}

Vector GaussianBlockBase::draw_strategic(Rng& rng) const {
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(schema_.strategic.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return v;
}

Vector GaussianBlockBase::draw_nonstrategic(Rng& rng) const {
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(schema_.nonstrategic.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return v;
}

double GaussianBlockBase::label_probability(const Vector& x) const { return sigmoid(bias_ + w_.dot(x)); }

namespace {

Vector label_weights(const FeatureSchema& schema, const SyntheticBaseOptions& o, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector w(static_cast<Eigen::Index>(schema.total));
  for (std::size_t i : schema.strategic) w[static_cast<Eigen::Index>(i)] = o.strategic_weight;
  for (std::size_t i : schema.nonstrategic) w[static_cast<Eigen::Index>(i)] = o.nonstrategic_weight * normal(rng);
  return w;
}

}  // namespace

std::shared_ptr<DiscreteBase> make_synthetic_base(const SyntheticBaseOptions& o) {
  FeatureSchema schema = FeatureSchema::make(o.features, o.strategic);
  if (o.atoms_per_strategic < 1 || o.nonstrategic_atoms < 1) throw InvalidInput("atom counts must be >= 1");
  if (!(o.base_rate > 0.0 && o.base_rate < 1.0)) throw InvalidInput("base_rate must lie in (0, 1)");
  Rng rng(o.seed);
  const Vector w = label_weights(schema, o, rng);
  const double bias = std::log(o.base_rate / (1.0 - o.base_rate));

  const std::size_t k = o.atoms_per_strategic;
  const std::size_t ns = schema.strategic.size();
  std::size_t S = 1;
  for (std::size_t i = 0; i < ns; ++i) S *= k;
  Matrix xs(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(ns));
  for (std::size_t a = 0; a < S; ++a) {
    std::size_t rest = a;
    for (std::size_t j = 0; j < ns; ++j) {
      const std::size_t level = rest % k;
      rest /= k;
      xs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) =
          k == 1 ? 0.0 : -1.5 + 3.0 * static_cast<double>(level) / static_cast<double>(k - 1);
    }
  }
  const std::size_t F = o.nonstrategic_atoms;
  std::normal_distribution<double> normal;
  Matrix xf(static_cast<Eigen::Index>(F), static_cast<Eigen::Index>(schema.nonstrategic.size()));
  for (Eigen::Index i = 0; i < xf.rows(); ++i)
    for (Eigen::Index j = 0; j < xf.cols(); ++j) xf(i, j) = normal(rng);

  Matrix label(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(F));
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t f = 0; f < F; ++f) {
      const Vector x = schema.assemble(xs.row(static_cast<Eigen::Index>(s)).transpose(),
                                       xf.row(static_cast<Eigen::Index>(f)).transpose());
      label(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(f)) = sigmoid(bias + w.dot(x));
    }
  return std::make_shared<DiscreteBase>(std::move(schema), std::move(xs),
                                        Vector::Constant(static_cast<Eigen::Index>(S), 1.0 / static_cast<double>(S)),
                                        std::move(xf),
                                        Vector::Constant(static_cast<Eigen::Index>(F), 1.0 / static_cast<double>(F)),
                                        std::move(label));
}

std::shared_ptr<GaussianBlockBase> make_gaussian_block_base(const SyntheticBaseOptions& o) {
  FeatureSchema schema = FeatureSchema::make(o.features, o.strategic);
  Rng rng(o.seed);
  Vector w = label_weights(schema, o, rng);
  return std::make_shared<GaussianBlockBase>(std::move(schema), std::move(w),
                                             std::log(o.base_rate / (1.0 - o.base_rate)));
}

}  // namespace perfdyn::rir
