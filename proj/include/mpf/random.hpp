#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace mpf {

// SplitMix64 stream. Every distribution is drawn by inverse CDF from a single
// 53-bit uniform, so sequences are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), state_(seed) {}

  // Child stream keyed on (seed, index) only; independent of how many draws
  // the parent has made.
  static Rng fork(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform on [0, 1).
  double next_unit();

  double exponential(double rate);
  double uniform(double lo, double hi);
  std::size_t categorical(std::span<const double> weights);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t state() const noexcept { return state_; }
  void set_state(std::uint64_t state) noexcept { state_ = state; }

  // Standard normal via inverse CDF; used by the synthetic generators.
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// Free-function forms of the three draws the samplers need.
double exp_draw(Rng& rng, double rate);
double uniform_draw(Rng& rng, double lo, double hi);
std::size_t categorical_proportional(Rng& rng, std::span<const double> weights);

// Acklam's rational approximation refined by one Halley step.
double inverse_normal_cdf(double p);

}  // namespace mpf
