#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "perfdyn/core/errors.hpp"
#include "perfdyn/core/random.hpp"
#include "perfdyn/metrics/metrics.hpp"
#include "perfdyn/rir/credit.hpp"

using namespace perfdyn;
using namespace perfdyn::rir;

namespace {

// One strategic feature with atoms {a, b}, one non-strategic atom.
std::shared_ptr<DiscreteBase> two_atom_base() {
  Matrix xs(2, 1), xf(1, 1), label(2, 1);
  xs << -1.0, 1.0;
  xf << 0.0;
  label << 0.2, 0.7;
  return std::make_shared<DiscreteBase>(FeatureSchema::make(2, {0}), xs, Vector::Constant(2, 0.5), xf,
                                        Vector::Ones(1), label);
}

std::shared_ptr<DiscreteBase> small_synthetic() {
  SyntheticBaseOptions o;
  o.atoms_per_strategic = 3;
  o.nonstrategic_atoms = 3;
  return make_synthetic_base(o);
}

std::filesystem::path write_csv(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("perfdyn_" + name + ".csv");
  std::ofstream(p) << "a,b,c,d,e,f,g,h,i,j,k,label\n" << body;
  return p;
}

}  // namespace

TEST(RirSample, RejectionFrequencyMatchesConstantG) {
  const auto base = small_synthetic();
  const RejectionRule rule(0.3);
  const Predictor zero = [](const Vector&) { return 0.0; };
  Rng rng = make_rng(1, {key(Stream::property)});
  const int n = 100000;
  int rejected = 0;
  for (int i = 0; i < n; ++i) rejected += rir_sample(*base, zero, rule, rng).rejected;
  const double sd = std::sqrt(0.3 * 0.7 / n);
  EXPECT_NEAR(rejected / static_cast<double>(n), 0.3, 3.0 * sd);
}

TEST(RirSample, NonStrategicMarginalUnchanged) {
  const auto base = small_synthetic();
  const RejectionRule rule(0.4);
  const Vector preds = predictions_on_support(*base, [](const Vector& x) { return x[0] > 0 ? 0.5 : 0.0; }, rule);
  Rng rng = make_rng(2, {key(Stream::property)});
  const std::size_t F = base->nonstrategic_count();
  Vector counts = Vector::Zero(static_cast<Eigen::Index>(F));
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[static_cast<Eigen::Index>(rir_sample_index(*base, preds, rule, rng).atom % F)] += 1;
  for (Eigen::Index f = 0; f < counts.size(); ++f) {
    const double p = base->nonstrategic_probs()[f];
    EXPECT_NEAR(counts[f] / n, p, 3.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(RirDensity, ConstantModelLeavesBaseUnchanged) {
  const auto base = small_synthetic();
  const RejectionRule rule(0.55);
  const Vector preds = Vector::Constant(static_cast<Eigen::Index>(base->atom_count()), 0.2);
  EXPECT_LT((rir_density_table(*base, preds, rule) - base->base_probs()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RirDensity, TwoAtomHandValues) {
  const auto base = two_atom_base();
  const RejectionRule rule(0.1);
  const Vector preds = (Vector(2) << 0.1, 0.5).finished();  // g = 0.2, 0.6
  const Vector p = rir_density_table(*base, preds, rule);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.4, 1e-15);
  const Predictor f = [](const Vector& x) { return x[0] < 0 ? 0.1 : 0.5; };
  EXPECT_NEAR(rir_density((Vector(2) << -1.0, 0.0).finished(), f, rule, *base), 0.6, 1e-15);
}

TEST(RirDensity, Normalised) {
  const auto base = small_synthetic();
  Rng rng = make_rng(3, {key(Stream::property)});
  std::uniform_real_distribution<double> u(0.0, 0.45);
  for (int k = 0; k < 20; ++k) {
    Vector preds(static_cast<Eigen::Index>(base->atom_count()));
    for (Eigen::Index i = 0; i < preds.size(); ++i) preds[i] = u(rng);
    EXPECT_NEAR(rir_density_table(*base, preds, RejectionRule(0.55)).sum(), 1.0, 1e-12);
  }
}

TEST(RirDensity, RejectAlwaysGivesBase) {
  const auto base = small_synthetic();
  const RejectionRule rule(0.999999);
  const Vector preds = Vector::Constant(static_cast<Eigen::Index>(base->atom_count()), 1e-6);
  EXPECT_LT((rir_density_table(*base, preds, rule) - base->base_probs()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RirCertificate, Constant) {
  EXPECT_NEAR(rir_sensitivity_constant(0.55), 2.3704, 1e-3);
  EXPECT_NEAR(rir_sensitivity_constant(0.55), (1 / 0.55) * (1 + 0.45 / (2 * std::sqrt(0.55))), 1e-15);
  for (int i = 1; i < 100; ++i) {
    const double d = i / 100.0;
    EXPECT_LT(rir_sensitivity_constant(d), 1.0 / (d * d));
  }
}

TEST(RirCertificate, IdenticalModelsHold) {
  const auto base = small_synthetic();
  const Vector preds = Vector::Constant(static_cast<Eigen::Index>(base->atom_count()), 0.3);
  const auto r = rir_sensitivity_certificate(preds, preds, RejectionRule(0.55), *base);
  EXPECT_EQ(r.chi2, 0.0);
  EXPECT_EQ(r.bound, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(RirCertificate, SkewedMarginalViolates) {
  // p_s = {0.01, 0.99}, f_a = (1−δ, 0), a tiny move that keeps the mean rejection mass fixed.
  const double delta = 0.55, h = 1e-4;
  Matrix xs(2, 1), xf(1, 1), label(2, 1);
  xs << 0.0, 1.0;
  xf << 0.0;
  label << 0.5, 0.5;
  const DiscreteBase base(FeatureSchema::make(2, {0}), xs, (Vector(2) << 0.01, 0.99).finished(), xf, Vector::Ones(1),
                          label);
  const Vector fa = (Vector(2) << 1.0 - delta, 0.0).finished();
  const Vector fb = (Vector(2) << 1.0 - delta - h, 0.01 * h / 0.99).finished();
  const auto r = rir_sensitivity_certificate(fa, fb, RejectionRule(delta), base);
  EXPECT_FALSE(r.holds);
  EXPECT_NEAR(r.chi2 / r.weighted_norm_sq, 3.21, 0.01);
}

TEST(CreditModel, PredictionsInRangeAndGradientMatchesFiniteDifference) {
  const CreditModel m(3, 4, 0.55);
  Rng rng = make_rng(4, {key(Stream::init)});
  const Vector th = m.initialize(rng);
  Matrix x = Matrix::Random(5, 3);
  const Dataset d = Dataset::uniform(x, (Vector(5) << 0, 1, 1, 0, 1).finished());
  const Vector p = m.predict_batch(th, x);
  EXPECT_TRUE((p.array() >= 0.0).all() && (p.array() <= 0.45).all());
  const Vector g = m.gradient(th, d);
  for (Eigen::Index i = 0; i < th.size(); ++i) {
    Vector a = th, b = th;
    a[i] += 1e-6;
    b[i] -= 1e-6;
    EXPECT_NEAR(g[i], (m.loss(a, d) - m.loss(b, d)) / 2e-6, 1e-7);
  }
}

TEST(CreditStep, SameSeedSameModel) {
  SyntheticBaseOptions o;
  o.atoms_per_strategic = 3;
  const CreditModel model(11, 4, 0.55);
  Rng init = make_rng(1, {key(Stream::init)});
  const CreditProblem problem(make_synthetic_base(o), model, RejectionRule(0.55), ParamVec(model.initialize(init)));
  SolverOptions s;
  s.optimizer = Optimizer::adam;
  s.max_iters = 20;
  s.fail_on_max_iters = false;
  Rng a = make_rng(5, {}), b = make_rng(5, {});
  ParamVec ta = problem.initial_point(), tb = problem.initial_point();
  for (int t = 0; t < 3; ++t) {
    ta = credit_environment_step(ta, problem, 500, s, a);
    tb = credit_environment_step(tb, problem, 500, s, b);
  }
  EXPECT_EQ(ta, tb);
}

TEST(CreditStep, NoShiftWhenAlwaysRejected) {
  // δ → 1 leaves g ≡ 1: every draw resamples, so the distribution never moves.
  const CreditModel model(11, 4, 0.999999);
  Rng init = make_rng(2, {key(Stream::init)});
  const CreditProblem problem(small_synthetic(), model, RejectionRule(0.999999), ParamVec(model.initialize(init)));
  Rng rng = make_rng(3, {});
  const ParamVec a = problem.initial_point();
  SolverOptions s;
  s.optimizer = Optimizer::adam;
  s.max_iters = 20;
  s.fail_on_max_iters = false;
  const ParamVec b = credit_environment_step(a, problem, 500, s, rng);
  EXPECT_LT(metrics::loss_shift(problem, b, b, a, {}, 1), 1e-9);
}

TEST(CreditCsv, ValidFile) {
  const auto p = write_csv("valid", "1,2,3,4,5,6,7,8,9,10,11,0\n2,3,4,5,6,7,8,9,10,11,12,1\n0,1,2,3,4,5,6,7,8,9,1,0\n");
  const auto load = load_credit_csv(p.string(), {0, 1});
  EXPECT_EQ(load.rows, 3u);
  EXPECT_EQ(load.base->nonstrategic_count(), 3u);
  EXPECT_EQ(load.base->strategic_count(), 3u);
  EXPECT_EQ(load.dropped, 0u);
}

TEST(CreditCsv, MissingValueDropsRow) {
  const auto p = write_csv("missing", "1,2,3,4,5,6,7,8,9,10,11,0\n2,,4,5,6,7,8,9,10,11,12,1\n0,1,2,3,4,5,6,7,8,9,1,1\n");
  const auto load = load_credit_csv(p.string(), {0, 1});
  EXPECT_EQ(load.rows, 2u);
  EXPECT_EQ(load.base->nonstrategic_count(), 2u);
  ASSERT_EQ(load.dropped_rows.size(), 1u);
  EXPECT_EQ(load.dropped_rows[0], 2u);
}

TEST(CreditCsv, BadLabelReportsRow) {
  const auto p = write_csv("label", "1,2,3,4,5,6,7,8,9,10,11,0\n2,3,4,5,6,7,8,9,10,11,12,2\n");
  try {
    load_credit_csv(p.string(), {0, 1});
    FAIL() << "expected IngestionError";
  } catch (const IngestionError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(CreditCsv, WrongColumnCountAndUnreadableFile) {
  const auto p = write_csv("columns", "1,2,3\n");
  EXPECT_THROW(load_credit_csv(p.string(), {0, 1}), IngestionError);
  EXPECT_THROW(load_credit_csv("/nonexistent/credit.csv", {0, 1}), IngestionError);
}
