#include "perfdyn/core/divergence.hpp"

#include <cmath>

#include "perfdyn/core/errors.hpp"

namespace perfdyn {

WeightedNormSpec WeightedNormSpec::exact(DiscreteSupport support) {
  if (support.atoms.rows() != support.probs.size() || support.probs.size() == 0)
    throw InvalidInput("discrete support needs one probability per atom");
  WeightedNormSpec s;
  s.mode_ = Mode::exact;
  s.support_ = std::move(support);
  return s;
}

WeightedNormSpec WeightedNormSpec::monte_carlo(Sampler sampler, std::size_t samples,
                                               std::optional<DiscreteSupport> support) {
  if (samples < 1) throw InvalidInput("Monte Carlo sample count must be >= 1");
  if (!sampler) throw InvalidInput("Monte Carlo mode needs a sampler");
  WeightedNormSpec s;
  s.mode_ = Mode::monte_carlo;
  s.samples_ = samples;
  s.sampler_ = std::move(sampler);
  s.support_ = std::move(support);
  return s;
}

WeightedNormSpec WeightedNormSpec::exact_request(Sampler sampler, std::optional<DiscreteSupport> support) {
  WeightedNormSpec s;
  s.mode_ = Mode::exact;
  s.sampler_ = std::move(sampler);
  s.support_ = std::move(support);
  return s;
}

double weighted_norm_sq(const PredictionFn& f_a, const PredictionFn& f_b, const WeightedNormSpec& spec,
                        Rng* rng) {
  if (spec.mode() == WeightedNormSpec::Mode::exact) {
    if (!spec.support()) throw UnsupportedMode("exact weighted norm requires a closed-form discrete support");
    const auto& sup = *spec.support();
    double total = 0.0;
    for (Eigen::Index i = 0; i < sup.atoms.rows(); ++i) {
      const Vector x = sup.atoms.row(i).transpose();
      total += sup.probs[i] * (f_a(x) - f_b(x)).squaredNorm();
    }
    return total;
  }
  if (rng == nullptr) throw InvalidInput("Monte Carlo weighted norm requires an RNG");
  double total = 0.0;
  for (std::size_t i = 0; i < spec.samples(); ++i) {
    const Vector x = spec.sampler()(*rng);
    total += (f_a(x) - f_b(x)).squaredNorm();
  }
  return total / static_cast<double>(spec.samples());
}

SharedCovChi2 chi2_gaussian_shared_cov(const Vector& mu1, const Vector& mu2, const GaussianSpec& cov) {
  if (mu1.size() != mu2.size() || mu1.size() != cov.dim())
    throw InvalidInput("mean dimensions must match the covariance");
  const Vector diff = mu1 - mu2;
  const double q = diff.dot(cov.covariance().solve(diff));
  return {-std::expm1(-0.5 * q), 0.5 * q, std::expm1(q)};
}

double chi2_exact(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidInput("chi2 supports differ in size");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] <= 0.0) {
      if (p[i] > 0.0) throw DegenerateSupport("reference probability is zero where p is positive");
      continue;
    }
    const double d = p[i] - q[i];
    total += d * d / q[i];
  }
  return total;
}

double chi2_monte_carlo(const Sampler& p_sampler, const Density& p_density, const Density& q_density,
                        std::size_t n, Rng& rng) {
  if (n < 1) throw InvalidInput("sample count must be >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector x = p_sampler(rng);
    const double p = p_density(x);
    const double q = q_density(x);
    if (!(q > 0.0)) throw DegenerateSupport("reference density vanishes at a sampled point");
    if (!(p > 0.0)) continue;
    const double d = p - q;
    total += d * d / (p * q);
  }
  return total / static_cast<double>(n);
}

double w1_gaussian_bound(const GaussianSpec& a, const GaussianSpec& b) {
  if (a.dim() != b.dim()) throw InvalidInput("Gaussian dimensions differ");
  const double mean_term = (a.mean() - b.mean()).squaredNorm();
  const Matrix sa = a.covariance_matrix();
  const Matrix sb = b.covariance_matrix();
  // tr (Σa Σb)^{1/2} = tr (Σa^{1/2} Σb Σa^{1/2})^{1/2}
  Eigen::SelfAdjointEigenSolver<Matrix> ea(sa);
  const Matrix root_a = ea.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<Matrix> em(root_a * sb * root_a, Eigen::EigenvaluesOnly);
  const double cross = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double trace_term = std::max(0.0, sa.trace() + sb.trace() - 2.0 * cross);
  return std::sqrt(mean_term + trace_term);
}

}  // namespace perfdyn
