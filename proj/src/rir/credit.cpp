#include <random>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/minimizers/steps.hpp"
#include "perfdyn/rir/credit.hpp"

namespace perfdyn::rir {

CreditProblem::CreditProblem(std::shared_ptr<const BaseDistribution> base, CreditModel model, RejectionRule rule,
                             ParamVec theta0)
    : base_(std::move(base)), model_(model), rule_(rule), theta0_(std::move(theta0)) {
  if (!base_) throw InvalidInput("credit problem needs a base distribution");
  if (base_->schema().total != model_.inputs()) throw InvalidInput("model input width differs from the schema");
  if (std::abs(model_.delta() - rule_.delta) > 0.0) throw InvalidInput("model and rejection rule disagree on delta");
  if (static_cast<std::size_t>(theta0_.dim()) != model_.parameter_count())
    throw InvalidInput("initial parameters have the wrong size");
  loss_.kind = LossKind::prediction_loss;
  loss_.gamma = 2.0;
  loss_.sample_loss = [this](const Vector& th, const Dataset& d) { return model_.loss(th, d); };
  loss_.sample_gradient = [this](const Vector& th, const Dataset& d) { return model_.gradient(th, d); };
}

Dataset CreditProblem::consolidated_counts(const std::vector<std::size_t>& counts, std::size_t n) const {
  const DiscreteBase& d = *base_->discrete();
  std::size_t rows = 0;
  for (std::size_t c : counts) rows += c > 0;
  Dataset out;
  out.x.resize(static_cast<Eigen::Index>(rows), d.features().cols());
  out.y.resize(static_cast<Eigen::Index>(rows));
  out.w.resize(static_cast<Eigen::Index>(rows));
  Eigen::Index r = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    out.x.row(r) = d.features().row(static_cast<Eigen::Index>(k / 2));
    out.y[r] = static_cast<double>(k % 2);
    out.w[r] = static_cast<double>(counts[k]) / static_cast<double>(n);
    ++r;
  }
  return out;
}

Dataset CreditProblem::sample(const ParamVec& deployed, std::size_t n, Rng& rng) const {
  if (n < 1) throw InvalidInput("sample size must be >= 1");
  if (const DiscreteBase* d = base_->discrete()) {
    const Vector pred = model_.predict_batch(deployed.values(), d->features());
    std::vector<std::size_t> counts(2 * d->atom_count(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const RirIndexDraw draw = rir_sample_index(*d, pred, rule_, rng);
      ++counts[2 * draw.atom + static_cast<std::size_t>(draw.y)];
    }
    return consolidated_counts(counts, n);
  }
  const Predictor f = model_.predictor(deployed.values());
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(model_.inputs()));
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const RirDraw draw = rir_sample(*base_, f, rule_, rng);
    x.row(i) = draw.x.transpose();
    y[i] = draw.y;
  }
  return Dataset::uniform(std::move(x), std::move(y));
}

Dataset CreditProblem::base_sample(std::size_t n, Rng& rng) const {
  if (n < 1) throw InvalidInput("sample size must be >= 1");
  std::uniform_real_distribution<double> u01;
  if (const DiscreteBase* d = base_->discrete()) {
    const std::size_t F = d->nonstrategic_count();
    std::vector<std::size_t> counts(2 * d->atom_count(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t s = d->draw_strategic_index(rng);
      const std::size_t f = d->draw_nonstrategic_index(rng);
      const double v = u01(rng);
      const int y = v < d->label_prob()(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(f)) ? 1 : 0;
      ++counts[2 * (s * F + f) + static_cast<std::size_t>(y)];
    }
    return consolidated_counts(counts, n);
  }
  const FeatureSchema& schema = base_->schema();
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(schema.total));
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vector xs = base_->draw_strategic(rng);
    const Vector xf = base_->draw_nonstrategic(rng);
    const Vector row = schema.assemble(xs, xf);
    x.row(i) = row.transpose();
    y[i] = u01(rng) < base_->label_probability(row) ? 1.0 : 0.0;
  }
  return Dataset::uniform(std::move(x), std::move(y));
}

std::optional<double> CreditProblem::expected_loss(const ParamVec& model, const ParamVec& deployed) const {
  const DiscreteBase* d = base_->discrete();
  if (!d) return std::nullopt;
  const Vector shifted = rir_density_table(*d, model_.predict_batch(deployed.values(), d->features()), rule_);
  const Vector yhat = model_.predict_batch(model.values(), d->features());
  const std::size_t F = d->nonstrategic_count();
  double total = 0.0;
  for (Eigen::Index a = 0; a < shifted.size(); ++a) {
    const auto idx = static_cast<std::size_t>(a);
    const double q = d->label_prob()(static_cast<Eigen::Index>(idx / F), static_cast<Eigen::Index>(idx % F));
    total += shifted[a] * (q * (1.0 - yhat[a]) * (1.0 - yhat[a]) + (1.0 - q) * yhat[a] * yhat[a]);
  }
  return total;
}

ParamVec fit_on_base(const CreditProblem& problem, std::size_t n, const SolverOptions& solver, std::uint64_t seed) {
  Rng init = make_rng(seed, {key(Stream::init)});
  const Vector theta = problem.model().initialize(init);
  Rng data_rng = make_rng(seed, {key(Stream::init), key(Stream::data)});
  const Dataset data = problem.base_sample(n, data_rng);
  auto grad = [&](const Vector& th) { return problem.model().gradient(th, data); };
  return inner_gradient_solver(grad, ParamVec(theta), problem.feasible(), solver).x;
}

ParamVec credit_environment_step(const ParamVec& model, const CreditProblem& problem, std::size_t n_samples,
                                 const SolverOptions& solver, Rng& rng) {
  return rrm_step(model, problem, DataMode::empirical(n_samples), solver, rng);
}

}  // namespace perfdyn::rir
