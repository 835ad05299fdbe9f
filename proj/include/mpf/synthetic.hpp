#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpf/dataset.hpp"

namespace mpf {

// Known generator names.
const std::vector<std::string>& synthetic_names();

// Inliers first (label 0), then outliers drawn uniformly on [-6, 6]^D (label 1).
//
// blob              N(0, 0.5^2 I)
// two_blobs_tight   halves at (2,2) and (-2,-2), std 0.5
// two_blobs_spread  halves at (2,2) std 1.5 and (-2,-2) std 0.3
// moons             4 * (two moons with noise 0.05 - (0.5, 0.25))
// moon_and_blob     moons plus half the inliers from N((4,4), 0.5^2 I)
// gauss1d           N(0, 1)
// gauss_mix_1d      0.3 N(0, 1) + 0.7 N(5, 1)
// gauss2d           N(0, I)
// gauss_mix_2d      0.3 N((0,0), diag(1, 0.25)) + 0.7 N((5,5), [[1, 0.6], [0.6, 1]])
Dataset gen_synthetic(std::string_view name, std::size_t n_inliers, std::size_t n_outliers, std::uint64_t seed);

}  // namespace mpf
