#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "../oracles.hpp"
#include "mpf/error.hpp"
#include "mpf/serialize.hpp"
#include "mpf/streaming_tree.hpp"

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

constexpr double kTol = 1e-9;

MpTree worked_example() {
  const Matrix data = Matrix::from_rows({{0, 0}, {0.25, 0.25}, {0.4, 0.8}, {1, 1}});
  TreeConfig cfg;
  cfg.max_depth = 2;
  ScriptedCutPlanner script({Cut{0, 0.5, 0.1}, Cut{1, 0.4, 0.2}});
  return MpTree::sample(data, cfg, script);
}

Matrix normal_rows(Rng& rng, std::size_t n, std::size_t d) {
  Matrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.normal();
  }
  return m;
}

double leaf_total(const MpTree& t) {
  double total = 0.0;
  for (const LeafRegion& r : t.leaves()) total += r.mass;
  return total;
}

NodeId find_by_encoding(const MpTree& t, const std::string& code) {
  for (NodeId id : t.structure().preorder()) {
    if (t.encoding(id) == code) return id;
  }
  FAIL("no node with encoding " << code);
  return kNoNode;
}

std::vector<double> all_masses(const MpTree& t) {
  std::vector<double> out;
  for (const LeafRegion& r : t.leaves()) out.push_back(r.mass);
  return out;
}

}  // namespace

TEST_CASE("cut region volumes") {
  auto [a, b] = cut_region_volumes(BoundingBox::unit(2), 0, 0.5);
  CHECK(a == doctest::Approx(0.5));
  CHECK(b == doctest::Approx(0.5));
  std::tie(a, b) = cut_region_volumes(BoundingBox({0, 0}, {0.4, 0.8}), 1, 0.4);
  CHECK(a == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(b == doctest::Approx(0.16).epsilon(1e-12));
  std::tie(a, b) = cut_region_volumes(BoundingBox::unit(2), 0, 0.3);
  CHECK(a == doctest::Approx(0.3));
  CHECK(b == doctest::Approx(0.7));
  CHECK(code_of([] { cut_region_volumes(BoundingBox({0, 0}, {0, 1}), 0, 0.0); }) == ErrorCode::kDegenerateCut);
}

TEST_CASE("cut and restriction parameters") {
  BetaPair p = set_cut_parameters(0, 3, 1, 0.5, 0.5, 1.0);
  CHECK(p.a == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(p.b == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(p.mean() == doctest::Approx(0.7).epsilon(1e-12));
  p = set_cut_parameters(2, 2, 1, 0.16, 0.16, 1.0);
  CHECK(p.a == doctest::Approx(6.5).epsilon(1e-12));
  CHECK(p.b == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(p.mean() == doctest::Approx(13.0 / 24.0).epsilon(1e-12));
  CHECK(set_cut_parameters(3, 0, 0, 0.2, 0.2, 1.0).mean() == doctest::Approx(0.5));

  p = set_restriction_parameters(1, 3, 0.32, 0.18, 1.0);
  CHECK(p.a == doctest::Approx(5.56).epsilon(1e-12));
  CHECK(p.b == doctest::Approx(1.44).epsilon(1e-12));
  p = set_restriction_parameters(3, 2, 1.0 / 16.0, 0.0975, 1.0);
  CHECK(p.a == doctest::Approx(8.25).epsilon(1e-12));
  CHECK(p.b == doctest::Approx(9.75).epsilon(1e-12));
  CHECK(p.mean() == doctest::Approx(11.0 / 24.0).epsilon(1e-12));
  p = set_restriction_parameters(2, 0, 0.3, 0.3, 2.0);
  CHECK(p.a == doctest::Approx(9.0));
  CHECK(p.b == doctest::Approx(9.0));
  CHECK(code_of([] { set_restriction_parameters(1, 0, 0.0, 0.3, 1.0); }) == ErrorCode::kDegenerateRegion);
  CHECK(code_of([] { set_cut_parameters(0, 0, 0, 0.0, 0.3, 1.0); }) == ErrorCode::kDegenerateRegion);
}

TEST_CASE("worked example parameters") {
  const MpTree t = worked_example();
  const MptParams& root = t.params(t.structure().root());
  CHECK(std::abs(root.chi.a - 3.5) < kTol);
  CHECK(std::abs(root.chi.b - 1.5) < kTol);
  CHECK(std::abs(root.chi.mean() - 0.7) < kTol);

  const MptParams& n0 = t.params(find_by_encoding(t, "0∈"));
  CHECK(std::abs(n0.rho.a - 5.56) < kTol);
  CHECK(std::abs(n0.rho.b - 1.44) < kTol);
  CHECK(std::abs(n0.chi.a - 6.5) < kTol);
  CHECK(std::abs(n0.chi.b - 5.5) < kTol);
  CHECK(std::abs(n0.chi.mean() - 13.0 / 24.0) < kTol);

  const MptParams& n00 = t.params(find_by_encoding(t, "0∈0∈"));
  CHECK(std::abs(n00.rho.a - 8.25) < kTol);
  CHECK(std::abs(n00.rho.b - 9.75) < kTol);
  CHECK(std::abs(n00.rho.mean() - 11.0 / 24.0) < kTol);
}

TEST_CASE("worked example leaves") {
  const MpTree t = worked_example();
  std::map<std::string, LeafRegion> by_code;
  for (const LeafRegion& r : t.leaves()) by_code[r.encoding] = r;
  CHECK(by_code.size() == 5);
  for (const char* code : {"0∈0∈", "0∈0¬", "0∈1", "0¬", "1"}) CHECK(by_code.count(code) == 1);
  CHECK(std::abs(by_code["1"].mass - 0.3) < kTol);
  CHECK(std::abs(by_code["1"].density - 0.6) < kTol);
  CHECK(std::abs(t.leaf_mass(std::vector<double>{1, 1}) - 0.3) < kTol);
  CHECK(std::abs(t.density(std::vector<double>{1, 1}) - 0.6) < kTol);
  CHECK(std::abs(leaf_total(t) - 1.0) < 1e-12);
  CHECK(t.leaf_type(find_by_encoding(t, "1")) == LeafType::kObservedTypeI);
  CHECK(t.leaf_type(find_by_encoding(t, "0∈0∈")) == LeafType::kObservedTypeII);
  CHECK(t.leaf_type(find_by_encoding(t, "0∈")) == LeafType::kInternal);
  CHECK(t.leaf_type(t.structure().root()) == LeafType::kRoot);
}

TEST_CASE("complementary queries use the complementary volume") {
  const MpTree t = worked_example();
  // Inside R_0 but outside the observed box [0,0.4]x[0,0.8].
  const LeafQuery q = t.query(std::vector<double>{0.45, 0.9});
  CHECK(q.kind == RegionKind::kComplement);
  CHECK(std::abs(q.mass - 0.7 * 1.44 / 7.0) < kTol);
  CHECK(std::abs(q.density - q.mass / (0.5 - 0.32)) < kTol);
}

TEST_CASE("points outside the root box have zero mass and density") {
  const MpTree t = worked_example();
  const LeafQuery q = t.query(std::vector<double>{1.5, 0.5});
  CHECK(q.mass == 0.0);
  CHECK(q.density == 0.0);
  CHECK_FALSE(q.in_domain());
}

TEST_CASE("a single point is a root leaf with mass one") {
  const MpTree t = MpTree::sample(Matrix::from_rows({{0.3, 0.4}}), TreeConfig{});
  CHECK(t.structure().node_count() == 1);
  CHECK(t.leaf_mass(std::vector<double>{0.3, 0.4}) == 1.0);
}

TEST_CASE("a root-only tree on the unit square has density one") {
  TreeConfig cfg;
  cfg.lifetime = 0.0;
  const MpTree t = MpTree::sample(Matrix::from_rows({{0, 0}, {1, 1}, {0.3, 0.6}}), cfg);
  CHECK(t.leaf_mass(std::vector<double>{0.2, 0.9}) == 1.0);
  CHECK(t.density(std::vector<double>{0.2, 0.9}) == doctest::Approx(1.0));
}

TEST_CASE("sampled trees conserve mass and satisfy conjugacy") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    TreeConfig cfg;
    cfg.seed = seed;
    cfg.max_depth = 3 + seed % 8;
    const MpTree t = MpTree::sample(normal_rows(rng, 150, 1 + seed % 4), cfg);
    REQUIRE(std::abs(leaf_total(t) - 1.0) < 1e-9);
    const std::vector<std::size_t> counts = oracle::routed_counts(t);
    for (NodeId id : t.structure().preorder()) {
      const TreeNode& n = t.structure().node(id);
      const MptParams& p = t.params(id);
      REQUIRE(p.observed_log_volume <= p.region_log_volume);
      if (!n.is_leaf()) {
        REQUIRE(p.chi.a == p.prior_chi.a + static_cast<double>(counts[static_cast<std::size_t>(n.left)]));
        REQUIRE(p.chi.b == p.prior_chi.b + static_cast<double>(counts[static_cast<std::size_t>(n.right)]));
        REQUIRE(p.prior_chi.a + p.prior_chi.b == doctest::Approx(prior_strength(2 * n.depth, 1.0)).epsilon(1e-12));
      }
      if (p.restricted) {
        REQUIRE(p.rho.a == p.prior_rho.a + static_cast<double>(counts[static_cast<std::size_t>(id)]));
        REQUIRE(p.rho.b == p.prior_rho.b);
        REQUIRE(p.prior_rho.a + p.prior_rho.b ==
                doctest::Approx(prior_strength(restriction_polya_depth(n.depth - 1), 1.0)).epsilon(1e-12));
        // Volume ledger at moderate D.
        const double comp = std::exp(p.region_log_volume) - std::exp(p.observed_log_volume);
        REQUIRE(p.prior_rho.b / (p.prior_rho.a + p.prior_rho.b) ==
                doctest::Approx(comp / std::exp(p.region_log_volume)).epsilon(1e-9));
      }
      if (n.is_leaf()) {
        const bool type_one = !n.box.all_sides_positive();
        REQUIRE((t.leaf_type(id) == LeafType::kObservedTypeI || id == t.structure().root()) ==
                (type_one || id == t.structure().root()));
      }
    }
  }
}

TEST_CASE("grid integral of the streaming density is one") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed + 100);
    TreeConfig cfg;
    cfg.seed = seed;
    const MpTree t = MpTree::sample(normal_rows(rng, 300, 2), cfg);
    const BoundingBox& root = t.structure().node(t.structure().root()).box;
    const double integral = oracle::riemann_integral([&](std::span<const double> x) { return t.density(x); },
                                                     root.lower(), root.upper(), 200);
    CHECK(std::abs(integral - 1.0) <= 0.02);
  }
}

TEST_CASE("inserting an interior point only bumps counters") {
  MpTree t = worked_example();
  const MpTree before = t;
  const std::vector<double> z{0.1, 0.2};  // inside 0∈0∈
  ScriptedCutPlanner never({});
  t.insert(z, never);
  CHECK(t.size() == before.size() + 1);
  CHECK(t.structure().node_count() == before.structure().node_count());
  const std::vector<NodeId> path = t.structure().route_path(z);
  for (NodeId id : t.structure().preorder()) {
    const bool on_path = std::find(path.begin(), path.end(), id) != path.end();
    const MptParams& a = before.params(id);
    const MptParams& b = t.params(id);
    CHECK(b.rho.a == doctest::Approx(a.rho.a + (on_path && b.restricted ? 1.0 : 0.0)).epsilon(1e-14));
    CHECK(b.rho.b == a.rho.b);
    if (!t.structure().node(id).is_leaf()) {
      const NodeId left = t.structure().node(id).left;
      const bool went_left = std::find(path.begin(), path.end(), left) != path.end();
      CHECK(b.chi.a == doctest::Approx(a.chi.a + (on_path && went_left ? 1.0 : 0.0)).epsilon(1e-14));
      CHECK(b.chi.b == doctest::Approx(a.chi.b + (on_path && !went_left ? 1.0 : 0.0)).epsilon(1e-14));
    }
  }
}

TEST_CASE("insertion validates the point") {
  MpTree t = worked_example();
  CHECK(code_of([&] { t.insert(std::vector<double>{std::numeric_limits<double>::infinity(), 0.0}); }) ==
        ErrorCode::kInvalidPoint);
  CHECK(code_of([&] { t.insert(std::vector<double>{0.1}); }) == ErrorCode::kInvalidPoint);
}

TEST_CASE("deleting an interior duplicate keeps the structure") {
  MpTree t = worked_example();
  const MpTree before = t;
  const PointId dup = t.insert(std::vector<double>{0.25, 0.25});
  t.remove(dup);
  CHECK(t.structure().node_count() == before.structure().node_count());
  for (NodeId id : t.structure().preorder()) {
    CHECK(t.params(id).chi == before.params(id).chi);
    CHECK(t.params(id).rho == before.params(id).rho);
    CHECK(t.structure().node(id).time == before.structure().node(id).time);
  }
}

TEST_CASE("deleting an unknown id is an error") {
  MpTree t = worked_example();
  CHECK(code_of([&] { t.remove(17); }) == ErrorCode::kNotFound);
  t.remove(3);
  CHECK(code_of([&] { t.remove(3); }) == ErrorCode::kNotFound);
}

TEST_CASE("time rescale closed form") {
  CHECK(rescaled_node_time(0.0, 0.0, 1.0, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(oracle::rescaled_time_by_quantile(0.0, 0.0, 1.0, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rescaled_node_time(0.5, 0.7, 1.5, 3.0, 2.0) ==
        doctest::Approx(oracle::rescaled_time_by_quantile(0.5, 0.7, 1.5, 3.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("deleting the boundary point of a leaf removes it and lifts the sibling") {
  MpTree t = worked_example();
  t.remove(3);  // the lone point in leaf "1"
  CHECK(std::abs(leaf_total(t) - 1.0) < 1e-12);
  CHECK(t.size() == 3);
  // The root cut no longer separates anything, so 0∈ is the root.
  const TreeNode& root = t.structure().node(t.structure().root());
  CHECK(root.cut_dim == 1);
  CHECK(root.cut_loc == 0.4);
  CHECK(root.box == BoundingBox({0, 0}, {0.4, 0.8}));
  CHECK(root.depth == 0);
  CHECK(root.time == doctest::Approx(0.2));
}

TEST_CASE("insert then delete of interior points restores every value") {
  Rng rng(9);
  TreeConfig cfg;
  cfg.seed = 3;
  MpTree t = MpTree::sample(normal_rows(rng, 200, 3), cfg);
  const std::vector<double> masses = all_masses(t);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<NodeId> leaves = t.structure().leaves();
    NodeId leaf = leaves[rng.next_u64() % leaves.size()];
    if (!t.structure().node(leaf).box.all_sides_positive()) continue;
    const BoundingBox& box = t.structure().node(leaf).box;
    std::vector<double> z(3);
    for (std::size_t d = 0; d < 3; ++d) z[d] = rng.uniform(box.lower(d), box.upper(d));
    const PointId id = t.insert(z);
    t.remove(id);
    REQUIRE(all_masses(t) == masses);
  }
}

TEST_CASE("online insertion replays a batch-sampled tree") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Matrix data = normal_rows(rng, 60, 1 + seed % 3);
    TreeConfig cfg;
    cfg.seed = seed;
    cfg.max_depth = 4 + seed % 6;
    const MpTree batch = MpTree::sample(data, cfg);
    oracle::ReplayPlanner replay(batch.structure());
    MpTree online(data.cols(), cfg);
    std::vector<std::size_t> order(data.rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.next_u64() % i]);
    for (std::size_t i : order) online.insert(data.row(i), replay);
    const auto a = batch.structure().preorder();
    const auto b = online.structure().preorder();
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      const TreeNode& x = batch.structure().node(a[k]);
      const TreeNode& y = online.structure().node(b[k]);
      REQUIRE(x.box == y.box);
      REQUIRE(x.count == y.count);
      REQUIRE(x.is_leaf() == y.is_leaf());
      if (!x.is_leaf()) {
        REQUIRE(x.cut_dim == y.cut_dim);
        REQUIRE(x.cut_loc == y.cut_loc);
        REQUIRE(x.time == y.time);
      }
      REQUIRE(std::abs(batch.params(a[k]).chi.a - online.params(b[k]).chi.a) <= 1e-12);
      REQUIRE(std::abs(batch.params(a[k]).rho.b - online.params(b[k]).rho.b) <= 1e-12);
    }
  }
}

TEST_CASE("random inserts and deletes keep mass conservation and conjugacy") {
  Rng rng(21);
  TreeConfig cfg;
  cfg.seed = 21;
  cfg.lifetime = 3.0;
  MpTree t = MpTree::sample(normal_rows(rng, 100, 2), cfg);
  std::vector<PointId> live(100);
  for (PointId i = 0; i < 100; ++i) live[i] = i;
  for (int step = 0; step < 300; ++step) {
    if (live.size() > 1 && rng.next_unit() < 0.5) {
      const std::size_t k = rng.next_u64() % live.size();
      t.remove(live[k]);
      live.erase(live.begin() + static_cast<long>(k));
    } else {
      std::vector<double> z{1.5 * rng.normal(), 1.5 * rng.normal()};
      live.push_back(t.insert(z));
    }
    REQUIRE(t.size() == live.size());
    REQUIRE(std::abs(leaf_total(t) - 1.0) < 1e-9);
    for (NodeId id : t.structure().preorder()) {
      const TreeNode& n = t.structure().node(id);
      REQUIRE(n.depth <= cfg.max_depth);
      REQUIRE(n.box == bbox_of(t.structure().points(), t.structure().collect_points(id)));
      if (n.parent != kNoNode) REQUIRE(t.structure().node(n.parent).time < n.time);
      if (!n.is_leaf()) REQUIRE(n.time < cfg.lifetime);
    }
  }
  for (PointId id : live) REQUIRE(t.contains(id));
}

TEST_CASE("deleting every point empties the tree") {
  Rng rng(5);
  MpTree t = MpTree::sample(normal_rows(rng, 10, 2), TreeConfig{});
  for (PointId id = 0; id < 10; ++id) t.remove(id);
  CHECK(t.structure().empty());
  CHECK(t.query(std::vector<double>{0.0, 0.0}).mass == 0.0);
  t.insert(std::vector<double>{1.0, 2.0});
  CHECK(t.leaf_mass(std::vector<double>{1.0, 2.0}) == 1.0);
}

TEST_CASE("same seed and operations give identical snapshots") {
  auto run = [] {
    Rng rng(31);
    TreeConfig cfg;
    cfg.seed = 8;
    MpTree t = MpTree::sample(normal_rows(rng, 80, 2), cfg);
    for (int i = 0; i < 20; ++i) t.insert(std::vector<double>{rng.normal() * 2, rng.normal() * 2});
    for (PointId id = 0; id < 20; ++id) t.remove(id * 3);
    return tree_to_json(t).dump();
  };
  CHECK(run() == run());
}

TEST_CASE("snapshots round-trip") {
  Rng rng(41);
  TreeConfig cfg;
  cfg.seed = 4;
  cfg.lifetime = 5.0;
  MpTree t = MpTree::sample(normal_rows(rng, 120, 3), cfg);
  for (PointId id = 0; id < 30; ++id) t.remove(id);
  const nlohmann::json doc = tree_to_json(t);
  MpTree back = streaming_tree_from_json(nlohmann::json::parse(doc.dump()),
                                         std::make_shared<Matrix>(t.structure().points()));
  CHECK(tree_to_json(back).dump() == doc.dump());
  // Restored trees keep evolving identically.
  t.insert(std::vector<double>{4.0, 4.0, 4.0});
  back.insert(std::vector<double>{4.0, 4.0, 4.0});
  CHECK(tree_to_json(back).dump() == tree_to_json(t).dump());
}
