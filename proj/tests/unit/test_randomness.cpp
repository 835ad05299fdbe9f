#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mpf/error.hpp"
#include "mpf/random.hpp"

using namespace mpf;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kUsage;
}

}  // namespace

TEST_CASE("exponential draws replay from the seed") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(exp_draw(a, 1.0) == exp_draw(b, 1.0));
  Rng c(43);
  CHECK(exp_draw(c, 1.0) != exp_draw(a, 1.0));
}

TEST_CASE("exponential mean at rate 2 is within three standard errors of 1/2") {
  Rng rng(7);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += exp_draw(rng, 2.0);
  const double se = 0.5 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(sum / n - 0.5) < 3.0 * se);
}

TEST_CASE("exponential means scale inversely with the rate") {
  Rng rng(11);
  const int n = 100000;
  double fast = 0.0;
  double slow = 0.0;
  for (int i = 0; i < n; ++i) {
    fast += exp_draw(rng, 10.0);
    slow += exp_draw(rng, 1.0);
  }
  CHECK(std::abs((fast / slow) / 0.1 - 1.0) < 0.05);
}

TEST_CASE("non-positive rates are rejected") {
  Rng rng(1);
  CHECK(code_of([&] { exp_draw(rng, 0.0); }) == ErrorCode::kInvalidRate);
  CHECK(code_of([&] { exp_draw(rng, -1.0); }) == ErrorCode::kInvalidRate);
}

TEST_CASE("uniform draws") {
  Rng rng(3);
  CHECK(uniform_draw(rng, 0.0, 0.0) == 0.0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += uniform_draw(rng, 0.0, 1.0);
  CHECK(std::abs(sum / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
  for (int i = 0; i < 10000; ++i) {
    const double v = uniform_draw(rng, -2.0, -1.0);
    REQUIRE(v >= -2.0);
    REQUIRE(v <= -1.0);
  }
  CHECK(code_of([&] { uniform_draw(rng, 1.0, 0.0); }) == ErrorCode::kInvalidInterval);
}

TEST_CASE("categorical draws follow the weights") {
  Rng rng(5);
  const std::vector<double> single{0.0, 5.0, 0.0};
  for (int i = 0; i < 1000; ++i) REQUIRE(categorical_proportional(rng, single) == 1);

  const int n = 100000;
  const std::vector<double> even{1.0, 1.0};
  const std::vector<double> skew{1.0, 3.0};
  int hits_even = 0;
  int hits_skew = 0;
  for (int i = 0; i < n; ++i) {
    hits_even += categorical_proportional(rng, even) == 0 ? 1 : 0;
    hits_skew += categorical_proportional(rng, skew) == 1 ? 1 : 0;
  }
  CHECK(std::abs(hits_even / static_cast<double>(n) - 0.5) < 0.01);
  CHECK(std::abs(hits_skew / static_cast<double>(n) - 0.75) < 0.01);

  const std::vector<double> zeros{0.0, 0.0};
  CHECK(code_of([&] { categorical_proportional(rng, zeros); }) == ErrorCode::kNoValidDimension);
}

TEST_CASE("forked streams depend only on seed and index") {
  Rng first = Rng::fork(99, 3);
  Rng parent(99);
  for (int i = 0; i < 50; ++i) parent.next_u64();
  Rng again = Rng::fork(99, 3);
  for (int i = 0; i < 20; ++i) CHECK(first.next_u64() == again.next_u64());

  // Neighbouring children are uncorrelated.
  Rng a = Rng::fork(99, 0);
  Rng b = Rng::fork(99, 1);
  const int n = 20000;
  double sab = 0.0, sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.next_unit();
    const double y = b.next_unit();
    sab += x * y;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("state can be saved and resumed") {
  Rng rng(17);
  rng.next_u64();
  Rng copy(17);
  copy.set_state(rng.state());
  CHECK(copy.next_u64() == rng.next_u64());
}

TEST_CASE("inverse normal CDF matches tabulated quantiles") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.001) == doctest::Approx(-3.090232306167814).epsilon(1e-12));
  Rng rng(23);
  const int n = 100000;
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    ss += z * z;
  }
  CHECK(std::abs(s / n) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(ss / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
}
