#include <cmath>
#include <numbers>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/instances/instances.hpp"

namespace perfdyn::instances {

double arm_upper_constant() { return std::sqrt((std::sqrt(3.0) + 2.0) / 4.0); }

double rate_factor(RateKind kind, const SensitivityParams& p) {
  p.validate();
  const double mofakhami = std::sqrt(p.epsilon) * p.M / p.gamma;
  auto beta = [&] {
    if (!p.beta) throw InvalidInput("this rate needs beta");
    return *p.beta;
  };
  switch (kind) {
    case RateKind::perdomo_upper:
      return p.epsilon * beta() / p.gamma;
    case RateKind::perdomo_arm_lower:
      return p.epsilon * beta() / (2.0 * p.gamma);
    case RateKind::mofakhami_upper:
      return mofakhami;
    case RateKind::mofakhami_lower:
      return mofakhami / (1.0 / std::numbers::e + 2.0);
    case RateKind::arm_upper:
      return arm_upper_constant() * mofakhami;
  }
  return 0.0;
}

std::vector<double> rate_curve(RateKind kind, const SensitivityParams& params, std::size_t t_max) {
  if (t_max < 1) throw InvalidInput("t_max must be >= 1");
  const double f = rate_factor(kind, params);
  std::vector<double> out(t_max + 1);
  double v = 1.0;
  for (std::size_t t = 0; t <= t_max; ++t) {
    out[t] = v;
    v *= f;
  }
  return out;
}

bool arm_contraction_guaranteed(const SensitivityParams& params) {
  return rate_factor(RateKind::arm_upper, params) < 1.0;
}

}  // namespace perfdyn::instances
