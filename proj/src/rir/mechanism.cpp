#include "perfdyn/rir/mechanism.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "perfdyn/core/divergence.hpp"
#include "perfdyn/core/errors.hpp"

namespace perfdyn::rir {

RirDraw rir_sample(const BaseDistribution& base, const Predictor& model, const RejectionRule& rule, Rng& rng) {
  std::uniform_real_distribution<double> u01;
  const FeatureSchema& schema = base.schema();
  const Vector xs = base.draw_strategic(rng);
  const Vector xf = base.draw_nonstrategic(rng);
  const double u = u01(rng);
  const Vector xs_fresh = base.draw_strategic(rng);
  const double v = u01(rng);

  Vector x = schema.assemble(xs, xf);
  const double pred = model(x);
  if (!(pred >= 0.0 && pred <= rule.max_prediction() + 1e-12))
    throw InvalidInput("model prediction outside [0, 1 - delta]");
  const bool rejected = u < rule.g(pred);
  if (rejected) x = schema.assemble(xs_fresh, xf);
  const int y = v < base.label_probability(x) ? 1 : 0;
  return {std::move(x), y, rejected};
}

RirIndexDraw rir_sample_index(const DiscreteBase& base, const Vector& predictions, const RejectionRule& rule,
                              Rng& rng) {
  std::uniform_real_distribution<double> u01;
  const std::size_t F = base.nonstrategic_count();
  const std::size_t s = base.draw_strategic_index(rng);
  const std::size_t f = base.draw_nonstrategic_index(rng);
  const double u = u01(rng);
  const std::size_t s_fresh = base.draw_strategic_index(rng);
  const double v = u01(rng);

  const bool rejected = u < rule.g(predictions[static_cast<Eigen::Index>(s * F + f)]);
  const std::size_t s_out = rejected ? s_fresh : s;
  const int y = v < base.label_prob()(static_cast<Eigen::Index>(s_out), static_cast<Eigen::Index>(f)) ? 1 : 0;
  return {s_out * F + f, y, rejected};
}

Vector predictions_on_support(const DiscreteBase& base, const Predictor& model, const RejectionRule& rule) {
  const Matrix& x = base.features();
  Vector p(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    p[i] = model(x.row(i).transpose());
    if (!(p[i] >= 0.0 && p[i] <= rule.max_prediction() + 1e-12))
      throw InvalidInput("model prediction outside [0, 1 - delta]");
  }
  return p;
}

Vector rir_density_table(const DiscreteBase& base, const Vector& predictions, const RejectionRule& rule) {
  const std::size_t S = base.strategic_count(), F = base.nonstrategic_count();
  if (static_cast<std::size_t>(predictions.size()) != S * F) throw InvalidInput("one prediction per atom required");
  const Vector& ps = base.strategic_probs();
  const Vector& pf = base.nonstrategic_probs();
  Vector out(predictions.size());
  for (std::size_t f = 0; f < F; ++f) {
    double c = 0.0;
    for (std::size_t s = 0; s < S; ++s)
      c += ps[static_cast<Eigen::Index>(s)] * rule.g(predictions[static_cast<Eigen::Index>(s * F + f)]);
    for (std::size_t s = 0; s < S; ++s) {
      const auto a = static_cast<Eigen::Index>(s * F + f);
      out[a] = ps[static_cast<Eigen::Index>(s)] * pf[static_cast<Eigen::Index>(f)] * (1.0 - rule.g(predictions[a]) + c);
    }
  }
  return out;
}

double rir_density(const Vector& x, const Predictor& model, const RejectionRule& rule, const BaseDistribution& base) {
  const DiscreteBase* d = base.discrete();
  if (!d) throw UnsupportedMode("exact RIR density needs a discrete base distribution");
  const std::size_t a = d->locate(x);
  if (a == d->atom_count()) return 0.0;
  return rir_density_table(*d, predictions_on_support(*d, model, rule), rule)[static_cast<Eigen::Index>(a)];
}

double rir_sensitivity_constant(double delta) {
  return (1.0 / delta) * (1.0 + (1.0 - delta) / (2.0 * std::sqrt(delta)));
}

CertificateReport rir_sensitivity_certificate(const Vector& predictions_a, const Vector& predictions_b,
                                              const RejectionRule& rule, const DiscreteBase& base) {
  const Vector pa = rir_density_table(base, predictions_a, rule);
  const Vector pb = rir_density_table(base, predictions_b, rule);
  const double chi2 = chi2_exact(std::span<const double>(pb.data(), static_cast<std::size_t>(pb.size())),
                                 std::span<const double>(pa.data(), static_cast<std::size_t>(pa.size())));
  const double norm = (pa.array() * (predictions_a - predictions_b).array().square()).sum();
  const double bound = rir_sensitivity_constant(rule.delta) * norm;
  return {chi2, bound, norm, chi2 <= bound * (1.0 + 1e-12) + 1e-300};
}

CertificateReport rir_sensitivity_certificate(const Predictor& model_a, const Predictor& model_b,
                                              const RejectionRule& rule, const BaseDistribution& base) {
  const DiscreteBase* d = base.discrete();
  if (!d) throw UnsupportedMode("exact RIR certificate needs a discrete base distribution");
  return rir_sensitivity_certificate(predictions_on_support(*d, model_a, rule),
                                     predictions_on_support(*d, model_b, rule), rule, *d);
}

}  // namespace perfdyn::rir
