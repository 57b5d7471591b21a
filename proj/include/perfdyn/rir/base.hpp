#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "perfdyn/core/types.hpp"

namespace perfdyn::rir {

struct FeatureSchema {
  std::size_t total = 11;
  std::vector<std::size_t> strategic;
  std::vector<std::size_t> nonstrategic;

  // Validates the strategic indices and takes the rest as non-strategic.
  static FeatureSchema make(std::size_t total, std::vector<std::size_t> strategic);
  Vector assemble(const Vector& xs, const Vector& xf) const;
};

struct RejectionRule {
  double delta;

  explicit RejectionRule(double delta);
  double max_prediction() const { return 1.0 - delta; }
  // g(ŷ) = ŷ + δ
  double g(double prediction) const { return prediction + delta; }
};

class DiscreteBase;

// Base distribution p(x) p(y | x) with independent strategic and
// non-strategic blocks. Draw functions consume a fixed amount of randomness.
class BaseDistribution {
 public:
  virtual ~BaseDistribution() = default;
  virtual const FeatureSchema& schema() const = 0;
  virtual const DiscreteBase* discrete() const { return nullptr; }
  virtual Vector draw_strategic(Rng& rng) const = 0;
  virtual Vector draw_nonstrategic(Rng& rng) const = 0;
  virtual double label_probability(const Vector& x) const = 0;
};

// Product of two finite marginals; P(y = 1 | s, f) tabulated per atom pair.
// Atom pair (s, f) has flat index s·F + f.
class DiscreteBase : public BaseDistribution {
 public:
  DiscreteBase(FeatureSchema schema, Matrix strategic_atoms, Vector strategic_probs, Matrix nonstrategic_atoms,
               Vector nonstrategic_probs, Matrix label_prob);

  const FeatureSchema& schema() const override { return schema_; }
  const DiscreteBase* discrete() const override { return this; }
  Vector draw_strategic(Rng& rng) const override;
  Vector draw_nonstrategic(Rng& rng) const override;
  double label_probability(const Vector& x) const override;

  std::size_t strategic_count() const { return static_cast<std::size_t>(ps_.size()); }
  std::size_t nonstrategic_count() const { return static_cast<std::size_t>(pf_.size()); }
  std::size_t atom_count() const { return strategic_count() * nonstrategic_count(); }
  const Vector& strategic_probs() const { return ps_; }
  const Vector& nonstrategic_probs() const { return pf_; }
  const Matrix& label_prob() const { return label_; }
  const Matrix& strategic_atoms() const { return xs_; }
  const Matrix& nonstrategic_atoms() const { return xf_; }

  // Full feature vectors of all atom pairs, one row per flat index.
  const Matrix& features() const { return features_; }
  Vector base_probs() const;
  std::size_t draw_strategic_index(Rng& rng) const;
  std::size_t draw_nonstrategic_index(Rng& rng) const;
  // Flat index of x, or atom_count() when x is not an atom.
  std::size_t locate(const Vector& x) const;

 private:
  FeatureSchema schema_;
  Matrix xs_, xf_;
  Vector ps_, pf_;
  Matrix label_;
  Matrix features_;
  std::vector<double> cum_s_, cum_f_;
};

// Sampling-only base: Gaussian blocks with logistic labels.
class GaussianBlockBase : public BaseDistribution {
 public:
  GaussianBlockBase(FeatureSchema schema, Vector weights, double bias);
  const FeatureSchema& schema() const override { return schema_; }
  Vector draw_strategic(Rng& rng) const override;
  Vector draw_nonstrategic(Rng& rng) const override;
  double label_probability(const Vector& x) const override;

 private:
  FeatureSchema schema_;
  Vector w_;
  double bias_;
};

struct SyntheticBaseOptions {
  std::size_t features = 11;
  std::vector<std::size_t> strategic = {0, 1};
  std::size_t atoms_per_strategic = 4;
  std::size_t nonstrategic_atoms = 4;
  double base_rate = 0.15;
  double strategic_weight = 1.0;
  double nonstrategic_weight = 0.3;
  std::uint64_t seed = 7;
};

// Strategic features on an evenly spaced grid in [−1.5, 1.5], non-strategic
// atoms drawn from N(0, I), P(y = 1 | x) logistic in x.
std::shared_ptr<DiscreteBase> make_synthetic_base(const SyntheticBaseOptions& options);

std::shared_ptr<GaussianBlockBase> make_gaussian_block_base(const SyntheticBaseOptions& options);

}  // namespace perfdyn::rir
