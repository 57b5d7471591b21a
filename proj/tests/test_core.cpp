#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "perfdyn/core/divergence.hpp"
#include "perfdyn/core/errors.hpp"
#include "perfdyn/core/lemmas.hpp"
#include "perfdyn/core/random.hpp"

using namespace perfdyn;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

PredictionFn constant(const Vector& c) {
  return [c](const Vector&) { return c; };
}

}  // namespace

TEST(Rng, DerivedSeedsDependOnEveryKey) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
  Rng a = make_rng(5, {1}), b = make_rng(5, {1});
  EXPECT_EQ(a(), b());
}

TEST(WeightedNorm, IdenticalFunctionsGiveZero) {
  DiscreteSupport s{Matrix::Identity(2, 2), vec({0.5, 0.5})};
  const auto f = constant(vec({1.0, 2.0}));
  EXPECT_DOUBLE_EQ(weighted_norm_sq(f, f, WeightedNormSpec::exact(s)), 0.0);
}

TEST(WeightedNorm, ConstantFunctionsGiveParameterDistance) {
  DiscreteSupport s{Matrix::Identity(3, 3), vec({0.2, 0.3, 0.5})};
  EXPECT_NEAR(weighted_norm_sq(constant(vec({1.0, 2.0})), constant(vec({4.0, 6.0})), WeightedNormSpec::exact(s)),
              25.0, 1e-12);
}

TEST(WeightedNorm, TwoAtomHandSum) {
  Matrix atoms(2, 1);
  atoms << 0.0, 1.0;
  DiscreteSupport s{atoms, vec({0.5, 0.5})};
  const PredictionFn fa = [](const Vector& x) { return vec({x[0] == 0.0 ? 1.0 : 3.0}); };
  const PredictionFn fb = [](const Vector&) { return vec({0.0}); };
  EXPECT_NEAR(weighted_norm_sq(fa, fb, WeightedNormSpec::exact(s)), 5.0, 1e-12);
}

TEST(WeightedNorm, ExactRequestWithoutSupportIsUnsupported) {
  const Sampler sampler = [](Rng&) { return vec({0.0}); };
  EXPECT_THROW(
      weighted_norm_sq(constant(vec({0.0})), constant(vec({1.0})), WeightedNormSpec::exact_request(sampler, {})),
      UnsupportedMode);
}

TEST(SharedCovChi2, EqualMeansGiveZero) {
  const GaussianSpec cov(vec({0.0}), Covariance::isotropic(0.5));
  const auto r = chi2_gaussian_shared_cov(vec({1.0}), vec({1.0}), cov);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
  EXPECT_DOUBLE_EQ(r.quadratic_bound, 0.0);
}

TEST(SharedCovChi2, ScalarExample) {
  const GaussianSpec cov(vec({0.0}), Covariance::isotropic(0.5));
  const auto r = chi2_gaussian_shared_cov(vec({0.0}), vec({1.0}), cov);
  EXPECT_NEAR(r.value, 1.0 - std::exp(-1.0), 1e-12);
  EXPECT_NEAR(r.quadratic_bound, 1.0, 1e-12);
  EXPECT_NEAR(r.standard, std::exp(2.0) - 1.0, 1e-12);
}

TEST(SharedCovChi2, BoundDominatesValue) {
  Rng rng = make_rng(3, {key(Stream::property)});
  std::normal_distribution<double> n;
  for (int k = 0; k < 100; ++k) {
    Matrix b(3, 3);
    for (Eigen::Index i = 0; i < 9; ++i) b(i) = n(rng);
    const Matrix sigma = b * b.transpose() + 0.1 * Matrix::Identity(3, 3);
    const Vector m1 = vec({n(rng), n(rng), n(rng)}), m2 = vec({n(rng), n(rng), n(rng)});
    const auto r = chi2_gaussian_shared_cov(m1, m2, GaussianSpec(Vector::Zero(3), Covariance::full(sigma)));
    EXPECT_GE(r.quadratic_bound, r.value);
  }
}

TEST(Chi2Exact, HandSum) {
  const std::vector<double> p{0.6, 0.4}, q{0.5, 0.5};
  EXPECT_NEAR(chi2_exact(p, q), 0.04, 1e-15);
  EXPECT_DOUBLE_EQ(chi2_exact(q, q), 0.0);
}

TEST(Chi2MonteCarlo, MatchesStandardClosedForm) {
  const double s2 = 1.0, dm = 0.5;
  const GaussianSpec p(vec({dm}), Covariance::isotropic(s2)), q(vec({0.0}), Covariance::isotropic(s2));
  Rng rng = make_rng(11, {key(Stream::property)});
  const double mc = chi2_monte_carlo([&](Rng& r) { return p.sample(r); },
                                     [&](const Vector& x) { return p.density(x); },
                                     [&](const Vector& x) { return q.density(x); }, 1000000, rng);
  const double exact = std::exp(dm * dm / s2) - 1.0;
  EXPECT_NEAR(mc / exact, 1.0, 0.02);
}

TEST(W1Bound, Examples) {
  const GaussianSpec a(vec({0.0, 0.0}), Covariance::isotropic(1.0));
  EXPECT_NEAR(w1_gaussian_bound(a, a), 0.0, 1e-12);
  EXPECT_NEAR(w1_gaussian_bound(a, GaussianSpec(vec({3.0, 4.0}), Covariance::isotropic(1.0))), 5.0, 1e-12);
  EXPECT_NEAR(w1_gaussian_bound(GaussianSpec(vec({0.0}), Covariance::isotropic(1.0)),
                                GaussianSpec(vec({0.0}), Covariance::isotropic(4.0))),
              1.0, 1e-10);
}

TEST(WeightedExpMean, ZeroMeanAndParallelism) {
  EXPECT_EQ(gaussian_weighted_exp_mean(Vector::Zero(3), 0.7).norm(), 0.0);
  Rng rng = make_rng(2, {key(Stream::property)});
  std::normal_distribution<double> n;
  for (int k = 0; k < 50; ++k) {
    const Vector mu = vec({n(rng), n(rng), n(rng)});
    const Vector out = gaussian_weighted_exp_mean(mu, 0.5);
    EXPECT_NEAR(std::abs(out.normalized().dot(mu.normalized())), 1.0, 1e-12);
  }
}

TEST(WeightedExpMean, ScalarMatchesMonteCarlo) {
  // Oracle: 10⁶ draws, frozen at the first run; the closed form must stay within 1%.
  const double mu = 0.5, s2 = 0.5;
  Rng rng = make_rng(17, {key(Stream::property)});
  std::normal_distribution<double> n(mu, std::sqrt(s2));
  double acc = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double x = n(rng);
    acc += x * std::exp(-x * x / (2.0 * std::numbers::e));
  }
  acc /= 1e6;
  EXPECT_NEAR(gaussian_weighted_exp_mean(vec({mu}), s2)[0] / acc, 1.0, 0.01);
  // The form without the normaliser misses by about 8%.
  EXPECT_GT(gaussian_weighted_exp_mean_printed(vec({mu}), s2)[0] / acc, 1.05);
}

TEST(JordanChain, Shape) {
  EXPECT_EQ(jordan_chain_matrix(1), Matrix::Ones(1, 1));
  Matrix expect(3, 3);
  expect << 1, 0, 0, 1, 1, 0, 0, 1, 1;
  EXPECT_EQ(jordan_chain_matrix(3), expect);
  const Vector col = jordan_chain_matrix(5) * Vector::Unit(5, 0);
  EXPECT_EQ(col, Vector::Unit(5, 0) + Vector::Unit(5, 1));
}

TEST(TriangularInverse, UnitExample) {
  const Vector v = geometric_triangular_inverse_apply(2.0, 1.0, 3, 1.0);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(v[i]), 1.0, 1e-12);
  EXPECT_LT((v - triangular_inverse_direct(2.0, 1.0, 3, 1.0)).norm(), 1e-12);
  EXPECT_THROW(geometric_triangular_inverse_apply(1.5, 1.0, 3, 1.0), RegimeViolation);
}

TEST(TriangularInverse, ClosedFormMatchesDirectSolve) {
  Rng rng = make_rng(4, {key(Stream::property)});
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (Eigen::Index d : {1, 7, 32, 64}) {
    const double c = u(rng), b = c * (2.0 + u(rng));
    const Vector a = geometric_triangular_inverse_apply(b, c, d, 2.0);
    const Vector e = triangular_inverse_direct(b, c, d, 2.0);
    EXPECT_LT((a - e).cwiseAbs().maxCoeff(), 1e-10) << "d=" << d;
  }
}

TEST(MixedPowers, BoundaryAndEven) {
  EXPECT_TRUE(mixed_power_bound_check(1.0, 4.0, 3));
  EXPECT_TRUE(mixed_power_bound_check(0.3, 0.7, 10));
  EXPECT_THROW(mixed_power_bound_check(1.0, 5.0, 3), InvalidInput);
}
