#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/core/lemmas.hpp"
#include "perfdyn/instances/instances.hpp"

namespace perfdyn::instances {

namespace {

constexpr double kE = std::numbers::e;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be positive");
}

}  // namespace

double MofakhamiTightnessInstance::default_radius(const Params& p) {
  require_positive(p.M, "M");
  require_positive(p.gamma, "gamma");
  if (!(p.epsilon >= 0.0)) throw InvalidInput("epsilon must be >= 0");
  const double cap = p.epsilon > 0.0 ? std::min(p.M / p.gamma, 1.0 / std::sqrt(p.epsilon)) : p.M / p.gamma;
  return 0.05 * cap;
}

MofakhamiTightnessInstance::MofakhamiTightnessInstance(Params p)
    : TargetQuadraticProblem("mofakhami_tightness", 1, p.gamma, LossKind::prediction_loss,
                             FeasibleSet::ball(default_radius(p)), ParamVec::scalar(p.theta0.value_or(default_radius(p)))),
      p_(p),
      radius_(default_radius(p)) {
  if (std::abs(initial_point()[0]) > radius_ * (1.0 + 1e-12)) throw InvalidInput("theta0 lies outside the feasible ball");
}

double MofakhamiTightnessInstance::rate() const { return std::sqrt(p_.epsilon) * p_.M / p_.gamma; }

Vector MofakhamiTightnessInstance::target(const Vector& x) const {
  return Vector::Constant(1, (p_.M / p_.gamma) * kSphere * (x[0] >= 0.0 ? 1.0 : -1.0));
}

GaussianSpec MofakhamiTightnessInstance::distribution(const ParamVec& theta) const {
  return GaussianSpec(std::sqrt(p_.epsilon) * theta.values(), Covariance::isotropic(kVariance));
}

Vector MofakhamiTightnessInstance::moments(const ParamVec& deployed) const {
  if (deployed.dim() != 1) throw UnsupportedMode("mofakhami_tightness is defined for d = 1 only");
  const double k = p_.M / p_.gamma;
  Vector m(2);
  // E[sign(x)] for x ~ N(μ, 1/2) is erf(μ).
  m[0] = k * kSphere * std::erf(std::sqrt(p_.epsilon) * deployed[0]);
  m[1] = k * k * kSphere * kSphere;
  return m;
}

Dataset MofakhamiTightnessInstance::sample(const ParamVec& deployed, std::size_t n, Rng& rng) const {
  std::normal_distribution<double> normal;
  const double mu = std::sqrt(p_.epsilon) * deployed[0];
  const double sd = std::sqrt(kVariance);
  Matrix x(static_cast<Eigen::Index>(n), 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, 0) = mu + sd * normal(rng);
  return Dataset::uniform(std::move(x));
}

ParamVec mofakhami_tightness_update(const MofakhamiTightnessInstance& inst, const ParamVec& theta) {
  if (theta.dim() != 1) throw UnsupportedMode("unsupported dimension: the tightness update is scalar");
  const auto& p = inst.params();
  const double v = (p.M / p.gamma) * std::erf(std::numbers::sqrt2 * std::sqrt(p.epsilon) * theta[0]);
  return ParamVec(inst.feasible().project(Vector::Constant(1, v)));
}

double MofakhamiLowerBoundInstance::default_L(const Params& p) {
  const double rate = std::sqrt(p.epsilon) * p.M / p.gamma;
  const double printed = 2.0 * p.M * (1.0 - p.delta) / (p.gamma * (p.delta + p.delta * p.delta));
  const double inactive = (1.0 - p.delta) / (p.delta * (1.0 - (1.0 - p.delta) * rate));
  return std::max(printed, inactive);
}

MofakhamiLowerBoundInstance::MofakhamiLowerBoundInstance(Params p)
    : TargetQuadraticProblem("mofakhami_lowerbound", p.d, p.gamma, LossKind::prediction_loss,
                             FeasibleSet::ball(p.delta * p.M / p.gamma), ParamVec::zeros(p.d)),
      p_(p),
      l_(p.L.value_or(default_L(p))),
      a_(jordan_chain_matrix(p.d)) {
  require_positive(p_.epsilon, "epsilon");
  require_positive(p_.M, "M");
  require_positive(p_.sigma, "sigma");
  if (!(p_.delta > 0.0 && p_.delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (std::sqrt(p_.epsilon) * p_.M / p_.gamma > 1.0) throw InvalidInput("requires sqrt(epsilon) M / gamma <= 1");
  if (p_.sigma > std::numbers::sqrt2 / 2.0 + 1e-15) throw InvalidInput("requires sigma <= sqrt(2)/2");
  const double printed_bound = 2.0 * p_.M * (1.0 - p_.delta) / (p_.gamma * (p_.delta + p_.delta * p_.delta));
  if (l_ < printed_bound) throw InvalidInput(fmt::format("L = {} is below the required {}", l_, printed_bound));
  solve_stable_point();
}

Vector MofakhamiLowerBoundInstance::mean(const Vector& theta) const {
  return std::sqrt(sigma_sq() * p_.epsilon / 2.0) * (a_ * theta) + Vector::Unit(p_.d, 0) / l_;
}

GaussianSpec MofakhamiLowerBoundInstance::distribution(const ParamVec& theta) const {
  return GaussianSpec(mean(theta.values()), Covariance::isotropic(sigma_sq()));
}

Vector MofakhamiLowerBoundInstance::target(const Vector& x) const {
  return (p_.M / p_.gamma) * (1.0 - p_.delta) * std::exp(-x.squaredNorm() / (2.0 * kE)) * x;
}

double MofakhamiLowerBoundInstance::scalar_factor(const Vector& mu) const {
  // Both weighted means are c·μ; this is c.
  const double k = 1.0 + sigma_sq() / kE;
  const double c = std::exp(-(mu.squaredNorm() / (2.0 * sigma_sq())) * (1.0 - 1.0 / k)) / k;
  if (p_.model == ExpectationModel::printed) return c;
  return std::pow(k, -0.5 * static_cast<double>(mu.size())) * c;
}

Vector MofakhamiLowerBoundInstance::moments(const ParamVec& deployed) const {
  const double k = (p_.M / p_.gamma) * (1.0 - p_.delta);
  const Vector mu = mean(deployed.values());
  Vector m(p_.d + 1);
  m.head(p_.d) = k * scalar_factor(mu) * mu;
  m[p_.d] = k * k * gaussian_weighted_exp_sq_mean(mu, sigma_sq());
  return m;
}

Dataset MofakhamiLowerBoundInstance::sample(const ParamVec& deployed, std::size_t n, Rng& rng) const {
  std::normal_distribution<double> normal;
  const Vector mu = mean(deployed.values());
  const double sd = p_.sigma;
  Matrix x(static_cast<Eigen::Index>(n), p_.d);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = mu[j] + sd * normal(rng);
  return Dataset::uniform(std::move(x));
}

double MofakhamiLowerBoundInstance::rate() const {
  return (1.0 / (1.0 / kE + 2.0)) * std::sqrt(p_.epsilon) * p_.M / p_.gamma;
}

double MofakhamiLowerBoundInstance::tail_constant(std::size_t T) const {
  const Vector& v = stable_.values();
  double k = INFINITY;
  for (std::size_t t = 0; t <= T; ++t) {
    const auto from = static_cast<Eigen::Index>(t);
    if (from >= p_.d) break;
    k = std::min(k, v.tail(p_.d - from).norm() / std::pow(rate(), static_cast<double>(t)));
  }
  return k;
}

void MofakhamiLowerBoundInstance::solve_stable_point() {
  const Eigen::Index d = p_.d;
  const double pre = (p_.M / p_.gamma) * (1.0 - p_.delta);
  const double root = std::sqrt(sigma_sq() * p_.epsilon);
  auto stable_for = [&](double c) -> Vector {
    const double k = (1.0 - p_.delta) * (c / std::numbers::sqrt2) * root * p_.M / p_.gamma;
    const Matrix m = Matrix::Identity(d, d) - k * a_;
    return m.triangularView<Eigen::Lower>().solve(Vector(pre * c * Vector::Unit(d, 0) / l_));
  };
  double c = 1.0 / (1.0 + sigma_sq() / kE);
  bool done = false;
  for (int it = 0; it < 10000; ++it) {
    const double next = scalar_factor(mean(stable_for(c)));
    if (std::abs(next - c) < 1e-12) {
      c = next;
      done = true;
      break;
    }
    c = 0.5 * c + 0.5 * next;
  }
  const Vector theta = stable_for(c);
  if (!done || !theta.allFinite())
    throw NonConvergence("stable-point scalar iteration did not contract", theta, c);
  if (theta.norm() > radius())
    throw InvalidInput(fmt::format("stable point norm {} exceeds the feasible radius {}; increase L", theta.norm(),
                                   radius()));
  c_ = c;
  stable_ = ParamVec(theta);
}

ParamVec mofakhami_lowerbound_update(const MofakhamiLowerBoundInstance& inst, const ParamVec& theta) {
  const Vector m = inst.moments(theta);
  return ParamVec(inst.feasible().project(m.head(inst.dim())));
}

}  // namespace perfdyn::instances
