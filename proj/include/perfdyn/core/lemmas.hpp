#pragma once

#include "perfdyn/core/types.hpp"

namespace perfdyn {

// E[x · exp(−‖x‖²/2e)] for x ~ N(μ, σ²I).
Vector gaussian_weighted_exp_mean(const Vector& mu, double sigma_sq);

// The same expression without the (1 + σ²/e)^{−d/2} normaliser. Kept because
// the lower-bound construction's constants are derived from it.
Vector gaussian_weighted_exp_mean_printed(const Vector& mu, double sigma_sq);

// E[‖x‖² · exp(−‖x‖²/e)] for x ~ N(μ, σ²I).
double gaussian_weighted_exp_sq_mean(const Vector& mu, double sigma_sq);

// Lower bidiagonal: ones on the diagonal and the first subdiagonal.
Matrix jordan_chain_matrix(Eigen::Index d);

// (bI − cA)⁻¹ e_1 / L from the geometric closed form v_i = (1/cL)(b/c − 1)^{−i}.
Vector geometric_triangular_inverse_apply(double b, double c, Eigen::Index d, double L);

// Same vector by forward substitution on the bidiagonal system.
Vector triangular_inverse_direct(double b, double c, Eigen::Index d, double L);

// b^{⌈t/2⌉} a^{⌊t/2⌋} ≤ 2 (ab)^{t/2}, for 0 < b ≤ 4a.
bool mixed_power_bound_check(double a, double b, unsigned t);

}  // namespace perfdyn
