#include "mpf/random.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mpf/error.hpp"

namespace mpf {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::fork(std::uint64_t seed, std::uint64_t index) {
  // Two rounds of mixing so that adjacent (seed, index) pairs land far apart.
  const std::uint64_t child = mix64(mix64(seed ^ 0x5851F42D4C957F2DULL) + kGolden * (index + 1));
  return Rng(child);
}

std::uint64_t Rng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kInvalidRate, "exponential rate must be positive, got " + std::to_string(rate));
  }
  return -std::log1p(-next_unit()) / rate;
}

double Rng::uniform(double lo, double hi) {
  if (!(lo <= hi)) {
    throw Error(ErrorCode::kInvalidInterval,
                "uniform interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "] is empty");
  }
  if (lo == hi) return lo;
  const double u = next_unit();
  const double value = lo + u * (hi - lo);
  return value > hi ? hi : value;
}

std::size_t Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw Error(ErrorCode::kNoValidDimension, "weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kNoValidDimension, "all categorical weights are zero");
  }
  const double target = next_unit() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cumulative += weights[i];
    if (target < cumulative) return i;
  }
  // Rounding can leave target == total.
  return last_positive;
}

double Rng::normal() {
  double u = next_unit();
  while (u == 0.0) u = next_unit();
  return inverse_normal_cdf(u);
}

double exp_draw(Rng& rng, double rate) { return rng.exponential(rate); }

double uniform_draw(Rng& rng, double lo, double hi) { return rng.uniform(lo, hi); }

std::size_t categorical_proportional(Rng& rng, std::span<const double> weights) {
  return rng.categorical(weights);
}

double inverse_normal_cdf(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

}  // namespace mpf
