#include "perfdyn/core/lemmas.hpp"

#include <cmath>
#include <numbers>

#include "perfdyn/core/errors.hpp"

namespace perfdyn {

namespace {

constexpr double kE = std::numbers::e;

void require_variance(double sigma_sq) {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) throw InvalidInput("sigma_sq must be positive");
}

}  // namespace

Vector gaussian_weighted_exp_mean_printed(const Vector& mu, double sigma_sq) {
  require_variance(sigma_sq);
  const double k = sigma_sq * (1.0 / kE + 1.0 / sigma_sq);
  const double expo = -(mu.squaredNorm() / (2.0 * sigma_sq)) * (1.0 - 1.0 / k);
  return std::exp(expo) * mu / k;
}

Vector gaussian_weighted_exp_mean(const Vector& mu, double sigma_sq) {
  const double k = 1.0 + sigma_sq / kE;
  return std::pow(k, -0.5 * static_cast<double>(mu.size())) * gaussian_weighted_exp_mean_printed(mu, sigma_sq);
}

double gaussian_weighted_exp_sq_mean(const Vector& mu, double sigma_sq) {
  require_variance(sigma_sq);
  const double d = static_cast<double>(mu.size());
  const double k = 1.0 + 2.0 * sigma_sq / kE;
  const double s_sq = sigma_sq / k;
  const double z = std::pow(k, -0.5 * d) * std::exp(-(mu.squaredNorm() / (2.0 * sigma_sq)) * (1.0 - 1.0 / k));
  return z * (mu.squaredNorm() / (k * k) + d * s_sq);
}

Matrix jordan_chain_matrix(Eigen::Index d) {
  if (d < 1) throw InvalidInput("dimension must be >= 1");
  Matrix a = Matrix::Identity(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i) a(i + 1, i) = 1.0;
  return a;
}

Vector geometric_triangular_inverse_apply(double b, double c, Eigen::Index d, double L) {
  if (d < 1) throw InvalidInput("dimension must be >= 1");
  if (c == 0.0) throw InvalidInput("c must be nonzero");
  if (!(L > 0.0)) throw InvalidInput("L must be positive");
  if (!(b > 0.0) || c / b > 0.5) throw RegimeViolation("closed-form inverse needs b > 0 and c/b <= 1/2");
  const double ratio = 1.0 / (b / c - 1.0);
  Vector v(d);
  double p = ratio;
  for (Eigen::Index i = 0; i < d; ++i) {
    v[i] = p / (c * L);
    p *= ratio;
  }
  return v;
}

Vector triangular_inverse_direct(double b, double c, Eigen::Index d, double L) {
  if (d < 1) throw InvalidInput("dimension must be >= 1");
  if (b == c) throw InvalidInput("b - c must be nonzero");
  Vector v(d);
  v[0] = 1.0 / (L * (b - c));
  for (Eigen::Index i = 1; i < d; ++i) v[i] = c * v[i - 1] / (b - c);
  return v;
}

bool mixed_power_bound_check(double a, double b, unsigned t) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("a and b must be positive");
  if (b > 4.0 * a) throw InvalidInput("requires b <= 4a");
  const double hi = std::ceil(t / 2.0);
  const double lo = std::floor(t / 2.0);
  const double lhs = hi * std::log(b) + lo * std::log(a);
  const double rhs = std::log(2.0) + 0.5 * t * (std::log(a) + std::log(b));
  return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
}

}  // namespace perfdyn
