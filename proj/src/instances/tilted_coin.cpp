#include <cmath>
#include <random>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/instances/instances.hpp"

namespace perfdyn::instances {

namespace {

// For radius r = δM/γ and target √ε = κγ/M, s² = ε/(4(1 + εr²)) inverts
// ε = s²/(1/4 − s²r²). The RRM slope k(δ) = 2s(1−δ)M/γ decreases in δ.
struct Solved {
  double delta, s, eps;
};

Solved solve(const TiltedCoinInstance::Params& p) {
  const double rho = p.M / p.gamma;
  auto at = [&](double delta) {
    const double r = delta * rho;
    const double kappa_eps = p.rate / rho;  // √ε
    const double s = std::sqrt(kappa_eps * kappa_eps / (4.0 * (1.0 + kappa_eps * kappa_eps * r * r)));
    const double eps = s * s / (0.25 - s * s * r * r);
    return Solved{delta, s, eps};
  };
  auto slope = [&](const Solved& v) { return 2.0 * v.s * (1.0 - v.delta) * rho; };
  double lo = 1e-12, hi = 1.0 - 1e-12;
  if (slope(at(lo)) < p.slope) throw InvalidInput("requested RRM slope is not reachable for this rate");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(at(mid)) > p.slope ? lo : hi) = mid;
  }
  return at(0.5 * (lo + hi));
}

}  // namespace

TiltedCoinInstance::TiltedCoinInstance(Params p)
    : TargetQuadraticProblem("tilted_coin", 1, p.gamma, LossKind::prediction_loss, FeasibleSet::ball(1.0),
                             ParamVec::scalar(0.0)),
      p_(p) {
  if (!(p_.rate > 0.0) || !(p_.slope > 0.0)) throw InvalidInput("rate and slope must be positive");
  if (!(p_.M > 0.0)) throw InvalidInput("M must be positive");
  const Solved v = solve(p_);
  delta_ = v.delta;
  s_ = v.s;
  eps_ = v.eps;
  const double r = radius();
  if (s_ * r >= 0.5) throw InvalidInput("tilt leaves the probability simplex");
  set_feasible(FeasibleSet::ball(r));
  const double theta0 = p_.theta0.value_or(0.5 * r);
  if (std::abs(theta0) > r) throw InvalidInput("theta0 lies outside the feasible interval");
  set_initial_point(ParamVec::scalar(theta0));
}

Vector TiltedCoinInstance::target(const Vector& x) const {
  return Vector::Constant(1, -(p_.M / p_.gamma) * (1.0 - delta_) * x[0]);
}

Vector TiltedCoinInstance::moments(const ParamVec& deployed) const {
  const double k = (p_.M / p_.gamma) * (1.0 - delta_);
  Vector m(2);
  m[0] = -k * 2.0 * s_ * deployed[0];
  m[1] = k * k;
  return m;
}

Dataset TiltedCoinInstance::sample(const ParamVec& deployed, std::size_t n, Rng& rng) const {
  std::uniform_real_distribution<double> u01;
  const double p_plus = 0.5 + s_ * deployed[0];
  Matrix x(static_cast<Eigen::Index>(n), 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, 0) = u01(rng) < p_plus ? 1.0 : -1.0;
  return Dataset::uniform(std::move(x));
}

double TiltedCoinInstance::chi2(double theta_a, double theta_b) const {
  const double pa = 0.5 + s_ * theta_a;
  const double pb = 0.5 + s_ * theta_b;
  const double d = pb - pa;
  return d * d / pa + d * d / (1.0 - pa);
}

}  // namespace perfdyn::instances
