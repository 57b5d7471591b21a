#include "perfdyn/core/types.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "perfdyn/core/errors.hpp"

namespace perfdyn {

ParamVec::ParamVec(Vector values) : values_(std::move(values)) {
  if (values_.size() < 1) throw InvalidInput("ParamVec must have dimension >= 1");
  if (!values_.allFinite()) throw InvalidInput("ParamVec entries must be finite");
}

ParamVec ParamVec::zeros(Eigen::Index d) { return ParamVec(Vector::Zero(d)); }

ParamVec ParamVec::scalar(double v) { return ParamVec(Vector::Constant(1, v)); }

Covariance Covariance::isotropic(double sigma_sq) {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq))
    throw InvalidInput("isotropic variance must be positive and finite");
  Covariance c;
  c.sigma_sq_ = sigma_sq;
  return c;
}

Covariance Covariance::full(Matrix sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
    throw InvalidInput("covariance must be a non-empty square matrix");
  if (!sigma.allFinite()) throw InvalidInput("covariance entries must be finite");
  if (!sigma.isApprox(sigma.transpose(), 1e-12))
    throw InvalidInput("covariance must be symmetric");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw InvalidInput("covariance must be positive definite");
  Covariance c;
  c.chol_ = llt.matrixL();
  c.full_ = std::move(sigma);
  return c;
}

Matrix Covariance::matrix(Eigen::Index d) const {
  if (full_) {
    if (full_->rows() != d) throw InvalidInput("covariance dimension mismatch");
    return *full_;
  }
  return sigma_sq_ * Matrix::Identity(d, d);
}

Vector Covariance::solve(const Vector& v) const {
  if (!full_) return v / sigma_sq_;
  if (full_->rows() != v.size()) throw InvalidInput("covariance dimension mismatch");
  Matrix L = *chol_;
  Vector y = L.triangularView<Eigen::Lower>().solve(v);
  return L.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix Covariance::cholesky_factor(Eigen::Index d) const {
  if (full_) {
    if (full_->rows() != d) throw InvalidInput("covariance dimension mismatch");
    return *chol_;
  }
  return std::sqrt(sigma_sq_) * Matrix::Identity(d, d);
}

std::optional<Eigen::Index> Covariance::fixed_dim() const {
  if (full_) return full_->rows();
  return std::nullopt;
}

GaussianSpec::GaussianSpec(Vector mean, Covariance cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() < 1 || !mean_.allFinite()) throw InvalidInput("Gaussian mean must be finite and non-empty");
  if (auto d = cov_.fixed_dim(); d && *d != mean_.size())
    throw InvalidInput("Gaussian mean and covariance dimensions differ");
}

Vector GaussianSpec::sample(Rng& rng) const {
  std::normal_distribution<double> normal;
  Vector z(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) z[i] = normal(rng);
  if (cov_.is_isotropic()) return mean_ + std::sqrt(cov_.sigma_sq()) * z;
  return mean_ + cov_.cholesky_factor(dim()) * z;
}

double GaussianSpec::density(const Vector& x) const {
  const Vector diff = x - mean_;
  const double q = diff.dot(cov_.solve(diff));
  double log_det;
  if (cov_.is_isotropic()) {
    log_det = static_cast<double>(dim()) * std::log(cov_.sigma_sq());
  } else {
    log_det = 2.0 * cov_.cholesky_factor(dim()).diagonal().array().log().sum();
  }
  const double log_norm = 0.5 * (static_cast<double>(dim()) * std::log(2.0 * std::numbers::pi) + log_det);
  return std::exp(-0.5 * q - log_norm);
}

void SensitivityParams::validate() const {
  if (!(epsilon >= 0.0)) throw InvalidInput("epsilon must be >= 0");
  if (!(M > 0.0)) throw InvalidInput("M must be > 0");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
  if (!(C >= 1.0)) throw InvalidInput("C must be >= 1");
  if (!(c > 0.0) || c > C) throw InvalidInput("c must satisfy 0 < c <= C");
  if (beta && !(*beta > 0.0)) throw InvalidInput("beta must be > 0");
}

}  // namespace perfdyn
