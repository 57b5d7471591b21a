#pragma once

#include <functional>

#include "perfdyn/rir/base.hpp"

namespace perfdyn::rir {

using Predictor = std::function<double(const Vector& x)>;

struct RirDraw {
  Vector x;
  int y;
  bool rejected;
};

// Draw x from the base; with probability g(f(x)) replace its strategic block
// by one fresh draw; then y ~ p(y | x).
RirDraw rir_sample(const BaseDistribution& base, const Predictor& model, const RejectionRule& rule, Rng& rng);

struct RirIndexDraw {
  std::size_t atom;
  int y;
  bool rejected;
};

// Index form for discrete bases; `predictions` holds f at every atom (flat index).
RirIndexDraw rir_sample_index(const DiscreteBase& base, const Vector& predictions, const RejectionRule& rule,
                              Rng& rng);

// Predictions at every atom of a discrete base, checked to lie in [0, 1−δ].
Vector predictions_on_support(const DiscreteBase& base, const Predictor& model, const RejectionRule& rule);

// Shifted probabilities p(x)(1 − g(f(x)) + C(x_f)) at every atom.
Vector rir_density_table(const DiscreteBase& base, const Vector& predictions, const RejectionRule& rule);

double rir_density(const Vector& x, const Predictor& model, const RejectionRule& rule, const BaseDistribution& base);

struct CertificateReport {
  double chi2;
  double bound;
  double weighted_norm_sq;
  bool holds;
};

// (1/δ)(1 + (1−δ)/(2√δ))
double rir_sensitivity_constant(double delta);

// χ²(D(f_b), D(f_a)) against constant·‖f_a − f_b‖² weighted by D(f_a).
CertificateReport rir_sensitivity_certificate(const Vector& predictions_a, const Vector& predictions_b,
                                              const RejectionRule& rule, const DiscreteBase& base);

CertificateReport rir_sensitivity_certificate(const Predictor& model_a, const Predictor& model_b,
                                              const RejectionRule& rule, const BaseDistribution& base);

}  // namespace perfdyn::rir
