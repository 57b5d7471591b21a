#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace perfdyn::harness {

struct SuiteResult {
  std::string name;
  bool passed = true;
  bool informational = false;  // reported, never fails validation
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string witness;  // worst case or the note itself
  double seconds = 0.0;
};

inline constexpr std::uint64_t kValidationSeed = 20240611;

// Gaussian-weighted exponential mean vs Monte Carlo, relative error ≤ 1%.
SuiteResult suite_weighted_exp_mean(std::uint64_t seed, std::size_t inputs = 20, std::size_t samples = 1000000);
// Printed vs normalised closed form (informational).
SuiteResult note_weighted_exp_mean_printed();
// χ²(αP1 + (1−α)P2, Q) ≤ (1+a)α²χ²(P1,Q) + (1+1/a)(1−α)²χ²(P2,Q).
SuiteResult suite_chi2_mixture(std::uint64_t seed, std::size_t instances = 1000);
// χ²((A1+A2)/2, (B1+B2)/2) ≤ χ²(A1,B1) + χ²(A2,B2).
SuiteResult suite_chi2_of_averages(std::uint64_t seed, std::size_t instances = 1000);
// Geometric closed form vs forward substitution, 1e−10 per entry, d ≤ 64.
SuiteResult suite_triangular_inverse(std::uint64_t seed, std::size_t instances = 200);
SuiteResult suite_w1_bound(std::uint64_t seed, std::size_t instances = 200);
// Shared-covariance χ²: bound channel and the standard form vs Monte Carlo.
SuiteResult suite_shared_cov_chi2(std::uint64_t seed, std::size_t pairs = 5, std::size_t samples = 1000000);
SuiteResult note_shared_cov_chi2();
SuiteResult suite_mixed_powers(std::uint64_t seed, std::size_t instances = 1000);
// Exact RIR χ² vs the certificate on random discrete instances across
// δ ∈ {0.25, 0.55, 0.9}, plus the constant against 1/δ² on a 99-point grid.
SuiteResult suite_rir_certificate(std::uint64_t seed, std::size_t instances = 500);
SuiteResult suite_rir_constant_grid();
SuiteResult note_rir_counterexample();
// Declared sensitivity of every analytic instance on random parameter pairs.
SuiteResult suite_instance_certificates(std::uint64_t seed, std::size_t pairs = 100);
// Two-snapshot ARM per-step bound on the tilted-coin instance.
SuiteResult suite_two_snapshot_bound();
SuiteResult note_two_snapshot_violation();

std::vector<SuiteResult> run_validation_suites(std::uint64_t seed = kValidationSeed);

std::string format_suites(const std::vector<SuiteResult>& results);

}  // namespace perfdyn::harness
