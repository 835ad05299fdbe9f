#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "mpf/batch_tree.hpp"
#include "mpf/error.hpp"

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

BatchTree half_cut_tree(const Matrix& data, double gamma = 1.0) {
  TreeConfig cfg;
  cfg.max_depth = 1;
  ScriptedCutPlanner script({Cut{0, 0.5, 0.1}});
  return fit_bmpt(sample_mondrian_process(BoundingBox::unit(2), data, cfg, script), data, gamma);
}

BatchTree random_bmpt(std::uint64_t seed, std::size_t n, std::size_t d, double gamma = 1.0) {
  Rng rng(seed);
  Matrix data(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) data(i, j) = std::pow(rng.next_unit(), 3.0);
  }
  RandomCutPlanner planner(rng);
  TreeConfig cfg;
  cfg.gamma = gamma;
  return fit_bmpt(sample_mondrian_process(BoundingBox::unit(d), data, cfg, planner), data, gamma);
}

}  // namespace

TEST_CASE("Polya prior") {
  CHECK(polya_prior(0, 1.0, 1.0, 1.0) == BetaPair{0.5, 0.5});
  CHECK(polya_prior(2, 1.0, 1.0, 1.0) == BetaPair{4.5, 4.5});
  const BetaPair p = polya_prior(0, 0.3, 0.7, 1.0);
  CHECK(p.a == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p.b == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(code_of([] { polya_prior(0, 0.0, 1.0, 1.0); }) == ErrorCode::kDegenerateRegion);
  CHECK(code_of([] { polya_prior(0, 1.0, -1.0, 1.0); }) == ErrorCode::kDegenerateRegion);
}

TEST_CASE("a single cell has mass and density one") {
  TreeConfig cfg;
  cfg.lifetime = 0.0;
  Rng rng(1);
  RandomCutPlanner planner(rng);
  const Matrix data = Matrix::from_rows({{0.2, 0.3}, {0.7, 0.1}});
  const BatchTree t = fit_bmpt(sample_mondrian_process(BoundingBox::unit(2), data, cfg, planner), data, 1.0);
  CHECK(t.leaf_mass(std::vector<double>{0.5, 0.5}) == 1.0);
  CHECK(bmpt_density(t, std::vector<double>{0.9, 0.9}) == doctest::Approx(1.0));
}

TEST_CASE("injected half cut with three points left and one right") {
  const BatchTree t = half_cut_tree(Matrix::from_rows({{0, 0}, {0.25, 0.25}, {0.4, 0.8}, {1, 1}}));
  const auto& root = t.params(t.partition().root());
  CHECK(root.posterior.a == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(root.posterior.b == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(t.leaf_mass(std::vector<double>{0.1, 0.1}) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(t.leaf_mass(std::vector<double>{0.9, 0.9}) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(bmpt_density(t, std::vector<double>{0.9, 0.9}) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("density outside the domain is an error") {
  const BatchTree t = half_cut_tree(Matrix::from_rows({{0.2, 0.2}}));
  CHECK(code_of([&] { t.density(std::vector<double>{1.5, 0.5}); }) == ErrorCode::kOutOfDomain);
  CHECK(t.query(std::vector<double>{1.5, 0.5}).mass == 0.0);
  CHECK(code_of([] { half_cut_tree(Matrix::from_rows({{2.0, 0.2}})); }) == ErrorCode::kOutOfDomain);
}

TEST_CASE("leaf masses sum to one and posteriors are prior plus counts") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const BatchTree t = random_bmpt(seed, 300, 1 + seed % 3);
    double total = 0.0;
    for (const LeafRegion& leaf : t.leaves()) {
      REQUIRE(leaf.mass >= 0.0);
      total += leaf.mass;
    }
    REQUIRE(std::abs(total - 1.0) < 1e-9);
    const MondrianTree& s = t.partition();
    for (NodeId id : s.preorder()) {
      const TreeNode& n = s.node(id);
      if (n.is_leaf()) continue;
      const auto& p = t.params(id);
      REQUIRE(p.posterior.a == p.prior.a + static_cast<double>(s.node(n.left).count));
      REQUIRE(p.posterior.b == p.prior.b + static_cast<double>(s.node(n.right).count));
      REQUIRE(p.prior.a + p.prior.b == doctest::Approx(prior_strength(n.depth, 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("grid integral of the batch density is one") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BatchTree t = random_bmpt(seed, 400, 2);
    const std::vector<double> lo{0, 0};
    const std::vector<double> hi{1, 1};
    const double integral =
        oracle::riemann_integral([&](std::span<const double> x) { return t.density(x); }, lo, hi, 200);
    CHECK(std::abs(integral - 1.0) <= 0.02);
  }
}

TEST_CASE("a huge gamma pulls cut means to the volume ratio") {
  const BatchTree t = random_bmpt(3, 300, 2, 1e6);
  const MondrianTree& s = t.partition();
  for (NodeId id : s.preorder()) {
    const TreeNode& n = s.node(id);
    if (n.is_leaf()) continue;
    const double left = s.node(n.left).box.volume();
    const double ratio = left / (left + s.node(n.right).box.volume());
    REQUIRE(std::abs(t.params(id).posterior.mean() - ratio) < 1e-3);
  }
}
