#include "perfdyn/rideshare/market.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "perfdyn/core/errors.hpp"

namespace perfdyn::rideshare {

namespace {

bool has_offdiag(const Matrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j && a(i, j) != 0.0) return true;
  return false;
}

Matrix draw_block(std::size_t L, double density, double weight, Rng& rng) {
  std::uniform_real_distribution<double> diag(0.5, 1.5), u01;
  const auto n = static_cast<Eigen::Index>(L);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = diag(rng);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double mask = u01(rng);
      const double value = u01(rng);
      if (mask < density) a(i, j) = weight * value;
    }
  // Guarantee non-diagonal structure even when the mask comes up empty.
  if (L > 1 && !has_offdiag(a)) a(0, 1) = weight * 0.5;
  return a;
}

}  // namespace

void MarketSpec::validate() const {
  const auto L = static_cast<Eigen::Index>(locations);
  if (locations < 1) throw InvalidInput("market needs at least one location");
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  if (!(noise_sd >= 0.0)) throw InvalidInput("noise_sd must be nonnegative");
  if (z_base.size() != L) throw InvalidInput("z_base has the wrong length");
  if (!z_base.allFinite() || (z_base.array() < 0.0).any()) throw InvalidInput("z_base must be finite and nonnegative");
  for (std::size_t p = 0; p < 2; ++p) {
    if (A_own[p].rows() != L || A_own[p].cols() != L || A_cross[p].rows() != L || A_cross[p].cols() != L)
      throw InvalidInput(fmt::format("player {} elasticity matrices have the wrong shape", p + 1));
    if ((A_own[p].array() > 0.0).any())
      throw InvalidInput(fmt::format("player {} own-price elasticities must be <= 0", p + 1));
    if ((A_cross[p].array() < 0.0).any())
      throw InvalidInput(fmt::format("player {} cross-price elasticities must be >= 0", p + 1));
    if (L > 1 && !has_offdiag(A_own[p]) && !has_offdiag(A_cross[p]))
      throw InvalidInput(fmt::format("player {} elasticity matrices are diagonal", p + 1));
  }
}

Vector MarketSpec::mean_demand(std::size_t player, const Vector& x_own, const Vector& x_opp) const {
  return A_own[player] * x_own + A_cross[player] * x_opp + z_base;
}

MarketSpec make_market(const MarketOptions& o) {
  if (o.locations < 1) throw InvalidInput("market needs at least one location");
  if (!(o.offdiag_density >= 0.0 && o.offdiag_density <= 1.0)) throw InvalidInput("offdiag_density must lie in [0, 1]");
  if (!(o.elasticity_scale > 0.0) || !(o.cross_scale >= 0.0) || !(o.offdiag_weight >= 0.0))
    throw InvalidInput("elasticity scales must be positive");
  if (!(o.z_lo >= 0.0 && o.z_hi >= o.z_lo)) throw InvalidInput("z_base range must satisfy 0 <= z_lo <= z_hi");
  Rng rng = make_rng(o.seed, {key(Stream::instance)});
  MarketSpec spec;
  spec.locations = o.locations;
  spec.lambda = o.lambda;
  spec.noise_sd = o.noise_sd;
  for (std::size_t p = 0; p < 2; ++p) {
    Matrix own = -o.elasticity_scale * draw_block(o.locations, o.offdiag_density, o.offdiag_weight, rng);
    const double norm = own.operatorNorm();
    if (norm >= 0.9 * o.lambda) own *= 0.9 * o.lambda / norm;
    spec.A_own[p] = own;
    spec.A_cross[p] =
        o.cross_scale * o.elasticity_scale * draw_block(o.locations, o.offdiag_density, o.offdiag_weight, rng);
  }
  std::uniform_real_distribution<double> z(o.z_lo, o.z_hi);
  spec.z_base.resize(static_cast<Eigen::Index>(o.locations));
  for (Eigen::Index i = 0; i < spec.z_base.size(); ++i) spec.z_base[i] = z(rng);
  spec.validate();
  return spec;
}

Vector load_z_base_csv(const std::string& path, std::size_t locations) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestionError(path + " has no header");
  Vector z = Vector::Constant(static_cast<Eigen::Index>(locations), NAN);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream cells(line);
    std::string loc, value;
    if (!std::getline(cells, loc, ',') || !std::getline(cells, value) || value.find(',') != std::string::npos)
      throw IngestionError(fmt::format("row {}: expected 2 columns", row), row);
    std::size_t used = 0;
    long index = -1;
    double v = NAN;
    try {
      index = std::stol(loc);
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      throw IngestionError(fmt::format("row {}: non-numeric entry", row), row);
    }
    if (index < 0 || static_cast<std::size_t>(index) >= locations)
      throw IngestionError(fmt::format("row {}: location {} out of range", row, index), row);
    if (!std::isfinite(v) || v < 0.0)
      throw IngestionError(fmt::format("row {}: mean demand must be finite and nonnegative", row), row);
    z[index] = v;
  }
  if (!z.allFinite()) throw IngestionError(fmt::format("{} does not cover all {} locations", path, locations));
  return z;
}

bool in_price_box(const Vector& x) { return x.allFinite() && x.cwiseAbs().maxCoeff() <= kPriceBound; }

Matrix demand_draw(const MarketSpec& spec, std::size_t player, const Vector& x_own, const Vector& x_opp, std::size_t n,
                   Rng& rng) {
  if (player > 1) throw InvalidInput("player index must be 0 or 1");
  if (!in_price_box(x_own) || !in_price_box(x_opp)) throw InvalidInput("prices outside [-30, 30]");
  const Vector mean = spec.mean_demand(player, x_own, x_opp);
  std::normal_distribution<double> normal;
  Matrix out(static_cast<Eigen::Index>(n), mean.size());
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = mean[j] + spec.noise_sd * normal(rng);
  return out;
}

Vector best_response_mean(const Vector& mean_demand, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  return (mean_demand / lambda).cwiseMax(-kPriceBound).cwiseMin(kPriceBound);
}

Vector best_response(const Matrix& demand, double lambda) {
  if (demand.rows() < 1) throw InvalidInput("best response needs at least one demand sample");
  return best_response_mean(demand.colwise().mean().transpose(), lambda);
}

}  // namespace perfdyn::rideshare
