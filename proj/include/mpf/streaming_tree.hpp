#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpf/cut_planner.hpp"
#include "mpf/mondrian.hpp"
#include "mpf/polya.hpp"
#include "mpf/query.hpp"
#include "mpf/random.hpp"

namespace mpf {

enum class LeafType { kRoot, kInternal, kObservedTypeI, kObservedTypeII };

std::string_view to_string(LeafType type);

// Polya parameters carried by one stored Mondrian node.
//
// `chi` splits the node box at its cut (internal nodes only). `rho` splits the
// cut region the node lives in into the node's observed box and the
// complementary remainder (non-root nodes whose box has positive volume).
// Posteriors are prior plus routed counts; the complementary side never
// receives counts.
struct MptParams {
  BetaPair prior_chi;
  BetaPair chi;
  BetaPair prior_rho;
  BetaPair rho;
  bool restricted = false;
  double observed_log_volume = 0.0;
  double region_log_volume = 0.0;
};

// Streaming Mondrian Polya tree. Only the Mondrian tree is stored; the
// cut-then-restrict partition of the whole root box is implicit in it.
class MpTree {
 public:
  MpTree() = default;

  // Empty tree of the given dimensionality; the first insert creates the root.
  MpTree(std::size_t dims, TreeConfig config, std::shared_ptr<Matrix> store = nullptr);

  // Samples a tree on every row of `data` using an Rng seeded from config.seed.
  static MpTree sample(const Matrix& data, const TreeConfig& config);
  static MpTree sample(const Matrix& data, const TreeConfig& config, CutPlanner& planner);
  static MpTree sample(std::shared_ptr<Matrix> store, std::vector<PointId> ids, const TreeConfig& config, Rng rng);
  static MpTree sample(std::shared_ptr<Matrix> store, std::vector<PointId> ids, const TreeConfig& config,
                       CutPlanner& planner);
  // Annotates an existing Mondrian tree.
  static MpTree from_structure(MondrianTree structure, Rng rng);

  // Appends z to the point store, inserts it and returns its id.
  PointId insert(std::span<const double> z);
  PointId insert(std::span<const double> z, CutPlanner& planner);
  // Inserts a row already present in the shared store.
  void insert_stored(PointId id);
  void insert_stored(PointId id, CutPlanner& planner);

  // Throws not-found when the id is not stored in this tree.
  void remove(PointId id);

  // Outside the root box: mass 0, density 0, kind kOutside.
  LeafQuery query(std::span<const double> x) const;
  double leaf_mass(std::span<const double> x) const { return query(x).mass; }
  double density(std::span<const double> x) const { return query(x).density; }

  // Every terminal region: observed leaves and complementary leaves.
  std::vector<LeafRegion> leaves() const;

  // Mass entering the cut region of `id`, before its restriction.
  double region_mass(NodeId id) const;
  std::string encoding(NodeId id) const;
  LeafType leaf_type(NodeId id) const;
  bool contains(PointId id) const;

  const MondrianTree& structure() const noexcept { return tree_; }
  const MptParams& params(NodeId id) const { return params_[static_cast<std::size_t>(id)]; }
  const TreeConfig& config() const noexcept { return tree_.config(); }
  std::size_t dims() const noexcept { return tree_.dims(); }
  std::size_t size() const { return tree_.size(); }
  Rng& rng() noexcept { return rng_; }
  const Rng& rng() const noexcept { return rng_; }

  // Swaps the point store for one holding the same rows (forest restore).
  void attach_store(std::shared_ptr<Matrix> store) { tree_.set_store(std::move(store)); }
  // Rebuilds derived parameters from geometry and counts.
  void refresh_all();
  // Direct structure access for deserialization.
  MondrianTree& mutable_structure() noexcept { return tree_; }

 private:
  void refresh(NodeId id);
  void refresh_subtree(NodeId id);
  void refresh_path(const std::vector<NodeId>& path);
  void shift_depths(NodeId id, long delta);
  void shift_times(NodeId id, double delta);
  void contract(NodeId id);
  void replace_child(NodeId parent, NodeId old_child, NodeId new_child);
  NodeId splice(NodeId below, const Cut& cut, PointId id);
  bool can_splice(NodeId id, std::span<const double> z) const;

  MondrianTree tree_;
  std::vector<MptParams> params_;
  Rng rng_;
};

// Time a node keeps under deletion when its linear dimension drops from
// `old_linear` to `new_linear`: the quantile of the old waiting time under
// Exp(old_linear), mapped through Exp(new_linear), added to the new parent time.
double rescaled_node_time(double old_parent_time, double new_parent_time, double time, double old_linear,
                          double new_linear);

MpTree sample_mpt(const Matrix& data, const TreeConfig& config, Rng rng);

}  // namespace mpf
