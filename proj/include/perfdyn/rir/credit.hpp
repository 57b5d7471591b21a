#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "perfdyn/minimizers/problem.hpp"
#include "perfdyn/minimizers/solver.hpp"
#include "perfdyn/rir/mechanism.hpp"

namespace perfdyn::rir {

// x ↦ (1−δ)·σ(w₂ᵀ tanh(W₁x + b₁) + b₂). Parameters are packed as
// [W₁ (row-major), b₁, w₂, b₂].
class CreditModel {
 public:
  CreditModel(std::size_t inputs, std::size_t hidden, double delta);

  std::size_t inputs() const { return in_; }
  std::size_t hidden() const { return h_; }
  double delta() const { return delta_; }
  std::size_t parameter_count() const { return h_ * in_ + 2 * h_ + 1; }

  Vector initialize(Rng& rng) const;
  double predict(const Vector& theta, const Vector& x) const;
  Vector predict_batch(const Vector& theta, const Matrix& x) const;
  // Weighted mean of (ŷ − y)².
  double loss(const Vector& theta, const Dataset& data) const;
  Vector gradient(const Vector& theta, const Dataset& data) const;
  Predictor predictor(const Vector& theta) const;

 private:
  std::size_t in_, h_;
  double delta_;
};

// Credit scoring under RIR with squared loss. On a discrete base, drawn
// datasets are returned consolidated (one row per distinct (x, y) with
// frequency weights) and expected losses are exact.
class CreditProblem : public Problem {
 public:
  CreditProblem(std::shared_ptr<const BaseDistribution> base, CreditModel model, RejectionRule rule, ParamVec theta0);
  CreditProblem(const CreditProblem&) = delete;
  CreditProblem& operator=(const CreditProblem&) = delete;

  std::string name() const override { return "credit"; }
  Eigen::Index dim() const override { return static_cast<Eigen::Index>(model_.parameter_count()); }
  ParamVec initial_point() const override { return theta0_; }
  const FeasibleSet& feasible() const override { return feasible_; }
  const LossSpec& loss() const override { return loss_; }
  Dataset sample(const ParamVec& deployed, std::size_t n, Rng& rng) const override;
  std::optional<double> expected_loss(const ParamVec& model, const ParamVec& deployed) const override;

  const CreditModel& model() const { return model_; }
  const RejectionRule& rule() const { return rule_; }
  const BaseDistribution& base() const { return *base_; }
  // n draws from the unshifted base.
  Dataset base_sample(std::size_t n, Rng& rng) const;

 private:
  Dataset consolidated_counts(const std::vector<std::size_t>& counts, std::size_t n) const;

  std::shared_ptr<const BaseDistribution> base_;
  CreditModel model_;
  RejectionRule rule_;
  ParamVec theta0_;
  FeasibleSet feasible_ = FeasibleSet::unconstrained();
  LossSpec loss_;
};

// Random initialisation followed by training on an unshifted base sample.
ParamVec fit_on_base(const CreditProblem& problem, std::size_t n, const SolverOptions& solver, std::uint64_t seed);

// One retraining round: draw n_samples under the deployed model, train from it.
ParamVec credit_environment_step(const ParamVec& model, const CreditProblem& problem, std::size_t n_samples,
                                 const SolverOptions& solver, Rng& rng);

struct CsvLoad {
  std::shared_ptr<DiscreteBase> base;
  std::size_t rows = 0;
  std::size_t dropped = 0;
  std::vector<std::size_t> dropped_rows;  // 1-based data row numbers
};

// 11 feature columns then a 0/1 label, with a header. Rows with missing
// values are dropped; features are standardised column-wise. Each retained
// row is one non-strategic atom carrying its own label; strategic atoms are
// the distinct strategic blocks, so the two blocks are independent.
CsvLoad load_credit_csv(const std::string& path, const std::vector<std::size_t>& strategic_indices,
                        std::size_t features = 11, bool standardize = true);

}  // namespace perfdyn::rir
