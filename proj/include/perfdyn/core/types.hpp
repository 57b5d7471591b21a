#pragma once

#include <optional>

#include <Eigen/Dense>

#include "perfdyn/core/random.hpp"

namespace perfdyn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Model parameters. Construction rejects empty or non-finite vectors, so any
// ParamVec in flight is usable.
class ParamVec {
 public:
  explicit ParamVec(Vector values);
  static ParamVec zeros(Eigen::Index d);
  static ParamVec scalar(double v);

  const Vector& values() const { return values_; }
  Eigen::Index dim() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  double norm() const { return values_.norm(); }
  double distance(const ParamVec& other) const { return (values_ - other.values_).norm(); }

  friend bool operator==(const ParamVec& a, const ParamVec& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Vector values_;
};

// σ²·I or a full SPD matrix.
class Covariance {
 public:
  static Covariance isotropic(double sigma_sq);
  static Covariance full(Matrix sigma);

  bool is_isotropic() const { return !full_.has_value(); }
  double sigma_sq() const { return sigma_sq_; }
  Matrix matrix(Eigen::Index d) const;
  // Σ⁻¹ v
  Vector solve(const Vector& v) const;
  // L with Σ = L Lᵀ
  Matrix cholesky_factor(Eigen::Index d) const;
  std::optional<Eigen::Index> fixed_dim() const;

 private:
  Covariance() = default;
  double sigma_sq_ = 1.0;
  std::optional<Matrix> full_;
  std::optional<Matrix> chol_;
};

class GaussianSpec {
 public:
  GaussianSpec(Vector mean, Covariance cov);

  const Vector& mean() const { return mean_; }
  const Covariance& covariance() const { return cov_; }
  Eigen::Index dim() const { return mean_.size(); }
  Matrix covariance_matrix() const { return cov_.matrix(dim()); }
  Vector sample(Rng& rng) const;
  double density(const Vector& x) const;

 private:
  Vector mean_;
  Covariance cov_;
};

struct SensitivityParams {
  double epsilon = 0.0;
  double M = 1.0;
  double gamma = 1.0;
  double C = 1.0;
  double c = 1.0;
  std::optional<double> beta;

  // Throws InvalidInput on violated invariants.
  void validate() const;
};

}  // namespace perfdyn
