#include <cmath>
#include <random>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/rir/credit.hpp"

namespace perfdyn::rir {

namespace {

struct Unpacked {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w1;
  Eigen::Map<const Vector> b1;
  Eigen::Map<const Vector> w2;
  double b2;
};

Unpacked unpack(const Vector& th, std::size_t in, std::size_t h) {
  const auto H = static_cast<Eigen::Index>(h), I = static_cast<Eigen::Index>(in);
  return {{th.data(), H, I}, {th.data() + H * I, H}, {th.data() + H * I + H, H}, th[H * I + 2 * H]};
}

// tanh through one vectorised exp.
Matrix tanh_layer(const Matrix& a) { return 1.0 - 2.0 / ((2.0 * a.array()).exp() + 1.0); }

}  // namespace

CreditModel::CreditModel(std::size_t inputs, std::size_t hidden, double delta) : in_(inputs), h_(hidden), delta_(delta) {
  if (inputs < 1 || hidden < 1) throw InvalidInput("network sizes must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
}

Vector CreditModel::initialize(Rng& rng) const {
  Vector th = Vector::Zero(static_cast<Eigen::Index>(parameter_count()));
  const double a1 = std::sqrt(6.0 / static_cast<double>(in_ + h_));
  const double a2 = std::sqrt(6.0 / static_cast<double>(h_ + 1));
  std::uniform_real_distribution<double> u1(-a1, a1), u2(-a2, a2);
  const auto H = static_cast<Eigen::Index>(h_), I = static_cast<Eigen::Index>(in_);
  for (Eigen::Index i = 0; i < H * I; ++i) th[i] = u1(rng);
  for (Eigen::Index i = 0; i < H; ++i) th[H * I + H + i] = u2(rng);
  return th;
}

Vector CreditModel::predict_batch(const Vector& theta, const Matrix& x) const {
  if (static_cast<std::size_t>(theta.size()) != parameter_count()) throw InvalidInput("parameter vector has the wrong size");
  const Unpacked p = unpack(theta, in_, h_);
  const Matrix hidden = tanh_layer((x * p.w1.transpose()).rowwise() + p.b1.transpose());
  const Vector z = (hidden * p.w2).array() + p.b2;
  return (1.0 - delta_) / (1.0 + (-z.array()).exp());
}

double CreditModel::predict(const Vector& theta, const Vector& x) const {
  return predict_batch(theta, x.transpose())[0];
}

double CreditModel::loss(const Vector& theta, const Dataset& data) const {
  const Vector r = predict_batch(theta, data.x) - data.y;
  return data.w.dot(r.cwiseAbs2());
}

Vector CreditModel::gradient(const Vector& theta, const Dataset& data) const {
  const Unpacked p = unpack(theta, in_, h_);
  const Matrix hidden = tanh_layer((data.x * p.w1.transpose()).rowwise() + p.b1.transpose());
  const Vector z = (hidden * p.w2).array() + p.b2;
  const Vector s = 1.0 / (1.0 + (-z.array()).exp());
  const Vector r = (1.0 - delta_) * s - data.y;
  const Vector gz = 2.0 * (1.0 - delta_) * (data.w.array() * r.array() * s.array() * (1.0 - s.array()));
  const Matrix ga = (gz * p.w2.transpose()).array() * (1.0 - hidden.array().square());

  const auto H = static_cast<Eigen::Index>(h_), I = static_cast<Eigen::Index>(in_);
  Vector g(theta.size());
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(g.data(), H, I) =
      ga.transpose() * data.x;
  g.segment(H * I, H) = ga.colwise().sum().transpose();
  g.segment(H * I + H, H) = hidden.transpose() * gz;
  g[H * I + 2 * H] = gz.sum();
  return g;
}

Predictor CreditModel::predictor(const Vector& theta) const {
  return [this, theta](const Vector& x) { return predict(theta, x); };
}

}  // namespace perfdyn::rir
