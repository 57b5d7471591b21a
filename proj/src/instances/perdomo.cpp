#include <cmath>
#include <random>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/core/lemmas.hpp"
#include "perfdyn/instances/instances.hpp"

namespace perfdyn::instances {

namespace {

Matrix gaussian_rows(const Vector& mean, double sigma_sq, std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal;
  const double sd = std::sqrt(sigma_sq);
  Matrix x(static_cast<Eigen::Index>(n), mean.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = mean[j] + sd * normal(rng);
  return x;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be positive");
}

}  // namespace

PerdomoTightnessInstance::PerdomoTightnessInstance(Params p)
    : TargetQuadraticProblem("perdomo_tightness", p.theta0.size(), p.gamma, LossKind::quadratic_in_theta,
                             FeasibleSet::unconstrained(), ParamVec(p.theta0)),
      p_(std::move(p)) {
  if (!(p_.epsilon >= 0.0)) throw InvalidInput("epsilon must be >= 0");
  require_positive(p_.beta, "beta");
  require_positive(p_.sigma_sq, "sigma_sq");
}

GaussianSpec PerdomoTightnessInstance::distribution(const ParamVec& theta) const {
  return GaussianSpec(p_.epsilon * theta.values(), Covariance::isotropic(p_.sigma_sq));
}

Vector PerdomoTightnessInstance::moments(const ParamVec& deployed) const {
  const double k = p_.beta / p_.gamma;
  const Vector mu = p_.epsilon * deployed.values();
  Vector m(dim() + 1);
  m.head(dim()) = k * mu;
  m[dim()] = k * k * (mu.squaredNorm() + static_cast<double>(dim()) * p_.sigma_sq);
  return m;
}

Dataset PerdomoTightnessInstance::sample(const ParamVec& deployed, std::size_t n, Rng& rng) const {
  return Dataset::uniform(gaussian_rows(p_.epsilon * deployed.values(), p_.sigma_sq, n, rng));
}

ParamVec perdomo_tightness_update(const PerdomoTightnessInstance& inst, const ParamVec& theta) {
  const auto& p = inst.params();
  return ParamVec((p.epsilon * p.beta / p.gamma) * theta.values());
}

PerdomoLowerBoundInstance::PerdomoLowerBoundInstance(Params p)
    : TargetQuadraticProblem("perdomo_lowerbound", p.d, p.gamma, LossKind::quadratic_in_theta,
                             FeasibleSet::unconstrained(), ParamVec(Vector::Unit(p.d, 0))),
      p_(p),
      a_(jordan_chain_matrix(p.d)) {
  require_positive(p_.epsilon, "epsilon");
  require_positive(p_.beta, "beta");
  require_positive(p_.sigma_sq, "sigma_sq");
  const double b = p_.gamma / p_.beta;
  const double c = p_.epsilon / 2.0;
  try {
    stable_ = ParamVec(geometric_triangular_inverse_apply(b, c, p_.d, 1.0));
  } catch (const RegimeViolation&) {
    closed_form_ = false;
    const Matrix m = b * Matrix::Identity(p_.d, p_.d) - c * a_;
    stable_ = ParamVec(m.triangularView<Eigen::Lower>().solve(Vector::Unit(p_.d, 0)));
  }
}

Vector PerdomoLowerBoundInstance::mean(const Vector& theta) const {
  return (p_.epsilon / 2.0) * (a_ * theta) + Vector::Unit(p_.d, 0);
}

GaussianSpec PerdomoLowerBoundInstance::distribution(const ParamVec& theta) const {
  return GaussianSpec(mean(theta.values()), Covariance::isotropic(p_.sigma_sq));
}

Vector PerdomoLowerBoundInstance::moments(const ParamVec& deployed) const {
  const double k = p_.beta / p_.gamma;
  const Vector mu = mean(deployed.values());
  Vector m(p_.d + 1);
  m.head(p_.d) = k * mu;
  m[p_.d] = k * k * (mu.squaredNorm() + static_cast<double>(p_.d) * p_.sigma_sq);
  return m;
}

Dataset PerdomoLowerBoundInstance::sample(const ParamVec& deployed, std::size_t n, Rng& rng) const {
  return Dataset::uniform(gaussian_rows(mean(deployed.values()), p_.sigma_sq, n, rng));
}

double PerdomoLowerBoundInstance::tail_constant(std::size_t T) const {
  const Vector& v = stable_.values();
  double k = INFINITY;
  for (std::size_t t = 0; t <= T; ++t) {
    const Eigen::Index from = static_cast<Eigen::Index>(t) + 1;
    if (from >= p_.d) break;
    const double tail = v.tail(p_.d - from).norm();
    k = std::min(k, tail / std::pow(rate(), static_cast<double>(t)));
  }
  return k;
}

ParamVec perdomo_lowerbound_update(const PerdomoLowerBoundInstance& inst, const ParamVec& theta) {
  const auto& p = inst.params();
  return ParamVec((p.beta / p.gamma) * inst.mean(theta.values()));
}

}  // namespace perfdyn::instances
