#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "perfdyn/core/types.hpp"
#include "perfdyn/instances/target_quadratic.hpp"

namespace perfdyn::instances {

// ℓ(z, θ) = γ/2‖θ − (β/γ)z‖², z ~ N(εθ, σ²I). RRM contracts by exactly εβ/γ.
class PerdomoTightnessInstance : public TargetQuadraticProblem {
 public:
  struct Params {
    double epsilon = 0.5;
    double beta = 1.0;
    double gamma = 1.0;
    double sigma_sq = 1.0;
    Vector theta0 = Vector::Ones(1);
  };
  explicit PerdomoTightnessInstance(Params p);

  const Params& params() const { return p_; }
  Vector target(const Vector& z) const override { return (p_.beta / p_.gamma) * z; }
  Vector moments(const ParamVec& deployed) const override;
  Dataset sample(const ParamVec& deployed, std::size_t n, Rng& rng) const override;
  std::optional<ParamVec> stable_point() const override { return ParamVec::zeros(dim()); }
  GaussianSpec distribution(const ParamVec& theta) const;

 private:
  Params p_;
};

ParamVec perdomo_tightness_update(const PerdomoTightnessInstance& inst, const ParamVec& theta);

// Scalar instance with D(θ) = N(√ε θ, 1/2) and target (M/γ)·0.95·x/|x|,
// feasible |θ| ≤ 0.05·min(M/γ, 1/√ε).
class MofakhamiTightnessInstance : public TargetQuadraticProblem {
 public:
  struct Params {
    double epsilon = 1.0;
    double M = 1.0;
    double gamma = 1.0;
    std::optional<double> theta0;  // defaults to the feasible radius
  };
  static constexpr double kVariance = 0.5;
  static constexpr double kSphere = 0.95;

  explicit MofakhamiTightnessInstance(Params p);

  const Params& params() const { return p_; }
  double radius() const { return radius_; }
  double rate() const;
  Vector target(const Vector& x) const override;
  Vector moments(const ParamVec& deployed) const override;
  Dataset sample(const ParamVec& deployed, std::size_t n, Rng& rng) const override;
  std::optional<ParamVec> stable_point() const override { return ParamVec::zeros(1); }
  GaussianSpec distribution(const ParamVec& theta) const;

 private:
  static double default_radius(const Params& p);
  Params p_;
  double radius_;
};

// proj_Θ((M/γ)·erf(√2·√ε·θ)), the closed-form update as stated for this instance.
ParamVec mofakhami_tightness_update(const MofakhamiTightnessInstance& inst, const ParamVec& theta);

// z ~ N((ε/2)Aθ + e_1, σ²I), ℓ = γ/2‖θ − (β/γ)z‖², A the Jordan-chain matrix.
class PerdomoLowerBoundInstance : public TargetQuadraticProblem {
 public:
  struct Params {
    double epsilon = 2.49;
    double beta = 1.0;
    double gamma = 5.0;
    double sigma_sq = 1.0;
    Eigen::Index d = 40;
  };
  explicit PerdomoLowerBoundInstance(Params p);

  const Params& params() const { return p_; }
  const Matrix& A() const { return a_; }
  Vector mean(const Vector& theta) const;
  Vector target(const Vector& z) const override { return (p_.beta / p_.gamma) * z; }
  Vector moments(const ParamVec& deployed) const override;
  Dataset sample(const ParamVec& deployed, std::size_t n, Rng& rng) const override;
  std::optional<ParamVec> stable_point() const override { return stable_; }
  GaussianSpec distribution(const ParamVec& theta) const;

  // Per-step factor εβ/2γ of the lower bound.
  double rate() const { return p_.epsilon * p_.beta / (2.0 * p_.gamma); }
  bool closed_form_stable_point() const { return closed_form_; }

  // min over t ≤ T of ‖θ_PS restricted to coordinates t+2..d‖ / rate^t. An
  // iterate started at e_1 is zero on those coordinates after t steps, so
  // K·rate^t lower-bounds its distance to θ_PS.
  double tail_constant(std::size_t T) const;

 private:
  Params p_;
  Matrix a_;
  ParamVec stable_ = ParamVec::zeros(1);
  bool closed_form_ = true;
};

ParamVec perdomo_lowerbound_update(const PerdomoLowerBoundInstance& inst, const ParamVec& theta);

enum class ExpectationModel { printed, exact };

// x ~ N(√(σ²ε/2)Aθ + e_1/L, σ²I), ℓ = (1/2γ)‖γθ − M(1−δ)x e^{−‖x‖²/2e}‖²,
// feasible ‖θ‖ ≤ δM/γ.
class MofakhamiLowerBoundInstance : public TargetQuadraticProblem {
 public:
  struct Params {
    double epsilon = 1.0;
    double M = 1.0;
    double gamma = 1.0;
    double delta = 0.01;
    double sigma = 0.70710678118654752;
    std::optional<double> L;  // defaults to default_L()
    Eigen::Index d = 40;
    ExpectationModel model = ExpectationModel::printed;
  };
  explicit MofakhamiLowerBoundInstance(Params p);

  static double default_L(const Params& p);

  const Params& params() const { return p_; }
  double L() const { return l_; }
  double sigma_sq() const { return p_.sigma * p_.sigma; }
  double radius() const { return p_.delta * p_.M / p_.gamma; }
  Vector mean(const Vector& theta) const;
  Vector target(const Vector& x) const override;
  Vector moments(const ParamVec& deployed) const override;
  Dataset sample(const ParamVec& deployed, std::size_t n, Rng& rng) const override;
  std::optional<ParamVec> stable_point() const override { return stable_; }
  GaussianSpec distribution(const ParamVec& theta) const;

  // The scalar c with E-weighted mean = c·μ at the stable point.
  double stable_scalar() const { return c_; }
  // Per-step factor (1/(1/e + 2))·√εM/γ of the lower bound.
  double rate() const;
  // min over t ≤ T of ‖θ_PS restricted to coordinates t+1..d‖ / rate^t; the
  // iterate started at 0 lies in span{e_1..e_t} after t steps.
  double tail_constant(std::size_t T) const;

 private:
  double scalar_factor(const Vector& mu) const;
  void solve_stable_point();

  Params p_;
  double l_;
  Matrix a_;
  double c_ = 0.0;
  ParamVec stable_ = ParamVec::zeros(1);
};

ParamVec mofakhami_lowerbound_update(const MofakhamiLowerBoundInstance& inst, const ParamVec& theta);

// Scalar two-point instance: x ∈ {−1, +1} with P(x = +1) = 1/2 + sθ, f_θ ≡ θ,
// ℓ = (1/2γ)(γθ + M(1−δ)x)², feasible |θ| ≤ δM/γ. The distribution map is
// ε-sensitive in χ² with ε = s²/(1/4 − s²r²), and RRM is θ ↦ −kθ with
// k = 2s(1−δ)M/γ.
class TiltedCoinInstance : public TargetQuadraticProblem {
 public:
  struct Params {
    double rate = 1.02;   // √εM/γ
    double slope = 0.98;  // RRM slope k; δ is solved from (rate, slope)
    double M = 1.0;
    double gamma = 1.0;
    std::optional<double> theta0;  // defaults to half the radius
  };
  explicit TiltedCoinInstance(Params p);

  const Params& params() const { return p_; }
  double delta() const { return delta_; }
  double tilt() const { return s_; }
  double epsilon() const { return eps_; }
  double radius() const { return delta_ * p_.M / p_.gamma; }
  double slope() const { return 2.0 * s_ * (1.0 - delta_) * p_.M / p_.gamma; }

  Vector target(const Vector& x) const override;
  Vector moments(const ParamVec& deployed) const override;
  Dataset sample(const ParamVec& deployed, std::size_t n, Rng& rng) const override;
  std::optional<ParamVec> stable_point() const override { return ParamVec::zeros(1); }
  // Exact χ²(D(θb), D(θa)).
  double chi2(double theta_a, double theta_b) const;

 private:
  Params p_;
  double delta_;
  double s_;
  double eps_;
};

enum class RateKind { perdomo_upper, perdomo_arm_lower, mofakhami_upper, mofakhami_lower, arm_upper };

// √((√3 + 2)/4)
double arm_upper_constant();

// Per-step factor of each rate; perdomo kinds require params.beta.
double rate_factor(RateKind kind, const SensitivityParams& params);

// factor^t for t = 0..t_max.
std::vector<double> rate_curve(RateKind kind, const SensitivityParams& params, std::size_t t_max);

// The two-snapshot ARM guarantee needs arm_upper_constant()·√εM/γ < 1;
// equality counts as no guarantee.
bool arm_contraction_guaranteed(const SensitivityParams& params);

}  // namespace perfdyn::instances
