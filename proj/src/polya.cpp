#include "mpf/polya.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpf/error.hpp"

namespace mpf {

double prior_strength(std::size_t polya_depth, double gamma) {
  const double k = static_cast<double>(polya_depth) + 1.0;
  return gamma * k * k;
}

BetaPair polya_prior(std::size_t depth, double v0, double v1, double gamma) {
  if (!(v0 > 0.0) || !(v1 > 0.0)) {
    throw Error(ErrorCode::kDegenerateRegion, "child volumes must be positive");
  }
  const double k = prior_strength(depth, gamma);
  return {k * v0 / (v0 + v1), k * v1 / (v0 + v1)};
}

std::pair<double, double> cut_region_volumes(const BoundingBox& box, std::size_t dim, double xi) {
  if (dim >= box.dims()) throw Error(ErrorCode::kDegenerateCut, "cut dimension out of range");
  const double h = box.side(dim);
  if (!(h > 0.0)) throw Error(ErrorCode::kDegenerateCut, "zero side length in cut dimension");
  if (xi < box.lower(dim) || xi > box.upper(dim)) {
    throw Error(ErrorCode::kDegenerateCut, "cut location outside the box");
  }
  const double per_length = box.volume() / h;
  return {per_length * (xi - box.lower(dim)), per_length * (box.upper(dim) - xi)};
}

BetaPair set_cut_parameters(std::size_t polya_depth, std::size_t n_left, std::size_t n_right, double v_left,
                            double v_right, double gamma) {
  if (!(v_left > 0.0) || !(v_right > 0.0)) {
    throw Error(ErrorCode::kDegenerateRegion, "cut region volumes must be positive");
  }
  const double k = prior_strength(polya_depth, gamma);
  const double total = v_left + v_right;
  return {k * v_left / total + static_cast<double>(n_left), k * v_right / total + static_cast<double>(n_right)};
}

BetaPair set_restriction_parameters(std::size_t polya_depth, std::size_t n_obs, double v_obs, double v_comp,
                                    double gamma) {
  if (!(v_obs > 0.0) || !(v_comp >= 0.0)) {
    throw Error(ErrorCode::kDegenerateRegion, "observed volume must be positive and complementary volume non-negative");
  }
  const double k = prior_strength(polya_depth, gamma);
  const double total = v_obs + v_comp;
  return {k * v_obs / total + static_cast<double>(n_obs), k * v_comp / total};
}

BetaPair fraction_prior(std::size_t polya_depth, double lower_fraction, double gamma) {
  const double f = std::clamp(lower_fraction, 0.0, 1.0);
  const double k = prior_strength(polya_depth, gamma);
  return {k * f, k * (1.0 - f)};
}

BetaPair restriction_prior_log(std::size_t polya_depth, double log_observed, double log_region, double gamma) {
  if (!std::isfinite(log_observed) || std::isnan(log_region) || log_observed > log_region + 1e-12) {
    throw Error(ErrorCode::kDegenerateRegion, "observed box must have positive volume inside its region");
  }
  const double k = prior_strength(polya_depth, gamma);
  const double log_ratio = std::min(log_observed - log_region, 0.0);
  return {k * std::exp(log_ratio), k * -std::expm1(log_ratio)};
}

}  // namespace mpf
