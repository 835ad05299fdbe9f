#include "mpf/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "mpf/error.hpp"
#include "mpf/random.hpp"

namespace mpf {

namespace {

void gaussian(Rng& rng, std::size_t n, double cx, double cy, double sx, double sy, std::vector<double>& out) {
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(cx + sx * rng.normal());
    out.push_back(cy + sy * rng.normal());
  }
}

void moons(Rng& rng, std::size_t n, std::vector<double>& out) {
  const std::size_t n_outer = n / 2;
  const std::size_t n_inner = n - n_outer;
  auto arc = [](std::size_t k, std::size_t count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(k) / static_cast<double>(count - 1) : 0.0;
  };
  for (std::size_t k = 0; k < n_outer; ++k) {
    const double t = arc(k, n_outer);
    const double x = std::cos(t) + 0.05 * rng.normal();
    const double y = std::sin(t) + 0.05 * rng.normal();
    out.push_back(4.0 * (x - 0.5));
    out.push_back(4.0 * (y - 0.25));
  }
  for (std::size_t k = 0; k < n_inner; ++k) {
    const double t = arc(k, n_inner);
    const double x = 1.0 - std::cos(t) + 0.05 * rng.normal();
    const double y = 1.0 - std::sin(t) - 0.5 + 0.05 * rng.normal();
    out.push_back(4.0 * (x - 0.5));
    out.push_back(4.0 * (y - 0.25));
  }
}

}  // namespace

const std::vector<std::string>& synthetic_names() {
  static const std::vector<std::string> names{"blob",    "two_blobs_tight", "two_blobs_spread", "moons",
                                              "moon_and_blob", "gauss1d", "gauss_mix_1d", "gauss2d",
                                              "gauss_mix_2d"};
  return names;
}

Dataset gen_synthetic(std::string_view name, std::size_t n_inliers, std::size_t n_outliers, std::uint64_t seed) {
  if (n_inliers == 0) throw Error(ErrorCode::kUsage, "n_inliers must be positive");
  Rng rng(seed);
  std::vector<double> values;
  std::size_t dims = 2;
  const std::size_t first = n_inliers - n_inliers / 2;
  const std::size_t second = n_inliers / 2;
  if (name == "blob") {
    gaussian(rng, n_inliers, 0.0, 0.0, 0.5, 0.5, values);
  } else if (name == "two_blobs_tight") {
    gaussian(rng, first, 2.0, 2.0, 0.5, 0.5, values);
    gaussian(rng, second, -2.0, -2.0, 0.5, 0.5, values);
  } else if (name == "two_blobs_spread") {
    gaussian(rng, first, 2.0, 2.0, 1.5, 1.5, values);
    gaussian(rng, second, -2.0, -2.0, 0.3, 0.3, values);
  } else if (name == "moons") {
    moons(rng, n_inliers, values);
  } else if (name == "moon_and_blob") {
    moons(rng, first, values);
    gaussian(rng, second, 4.0, 4.0, 0.5, 0.5, values);
  } else if (name == "gauss1d" || name == "gauss_mix_1d") {
    dims = 1;
    const bool mix = name == "gauss_mix_1d";
    for (std::size_t i = 0; i < n_inliers; ++i) {
      const double centre = mix && rng.next_unit() >= 0.3 ? 5.0 : 0.0;
      values.push_back(centre + rng.normal());
    }
  } else if (name == "gauss2d") {
    gaussian(rng, n_inliers, 0.0, 0.0, 1.0, 1.0, values);
  } else if (name == "gauss_mix_2d") {
    // Second component: Cholesky factor of [[1, 0.6], [0.6, 1]].
    const double l21 = 0.6;
    const double l22 = 0.8;
    for (std::size_t i = 0; i < n_inliers; ++i) {
      const bool heavy = rng.next_unit() >= 0.3;
      const double a = rng.normal();
      const double b = rng.normal();
      if (heavy) {
        values.push_back(5.0 + a);
        values.push_back(5.0 + l21 * a + l22 * b);
      } else {
        values.push_back(a);
        values.push_back(0.5 * b);
      }
    }
  } else {
    throw Error(ErrorCode::kUsage, "unknown synthetic dataset '" + std::string(name) + "'");
  }

  for (std::size_t i = 0; i < n_outliers * dims; ++i) values.push_back(rng.uniform(-6.0, 6.0));

  Dataset out;
  out.rows = Matrix(n_inliers + n_outliers, dims, std::move(values));
  out.labels.assign(n_inliers, 0);
  out.labels.resize(n_inliers + n_outliers, 1);
  for (std::size_t d = 0; d < dims; ++d) out.columns.push_back("x" + std::to_string(d));
  // Density samples without planted outliers carry no labels.
  if (name.starts_with("gauss") && n_outliers == 0) out.labels.clear();
  return out;
}

}  // namespace mpf
