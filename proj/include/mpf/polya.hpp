#pragma once

#include <cstddef>
#include <utility>

#include "mpf/geometry.hpp"

namespace mpf {

// Parameters of a Beta distribution; `a` belongs to the lower / observed side.
struct BetaPair {
  double a = 0.0;
  double b = 0.0;

  double mean() const { return a / (a + b); }
  BetaPair operator+(const BetaPair& o) const { return {a + o.a, b + o.b}; }
  BetaPair operator-(const BetaPair& o) const { return {a - o.a, b - o.b}; }
  friend bool operator==(const BetaPair&, const BetaPair&) = default;
};

// gamma * (depth + 1)^2: total pseudo-count of a split at the given Polya depth.
double prior_strength(std::size_t polya_depth, double gamma);

// The streaming tree runs two Polya levels per Mondrian node: the cut of a
// node at absolute depth d sits at 2d, the restriction of its children at 2d+1.
constexpr std::size_t cut_polya_depth(std::size_t node_depth) { return 2 * node_depth; }
constexpr std::size_t restriction_polya_depth(std::size_t parent_depth) { return 2 * parent_depth + 1; }

// Batch prior: alpha_k = gamma (depth+1)^2 v_k / (v0 + v1).
BetaPair polya_prior(std::size_t depth, double v0, double v1, double gamma);

// Volumes of the box on either side of `xi` along `dim`.
std::pair<double, double> cut_region_volumes(const BoundingBox& box, std::size_t dim, double xi);

// Posterior cut parameters: volume-proportional prior plus routed counts.
BetaPair set_cut_parameters(std::size_t polya_depth, std::size_t n_left, std::size_t n_right, double v_left,
                            double v_right, double gamma);

// Posterior restriction parameters: the observed side receives every count,
// the complementary side none. `v_comp` may be zero when the box fills its region.
BetaPair set_restriction_parameters(std::size_t polya_depth, std::size_t n_obs, double v_obs, double v_comp,
                                    double gamma);

// Prior split by a lower-side fraction in [0, 1].
BetaPair fraction_prior(std::size_t polya_depth, double lower_fraction, double gamma);

// Restriction prior from log volumes of the observed box and its enclosing
// region. Stays finite when both volumes underflow.
BetaPair restriction_prior_log(std::size_t polya_depth, double log_observed, double log_region, double gamma);

}  // namespace mpf
