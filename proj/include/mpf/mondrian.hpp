#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "mpf/cut_planner.hpp"
#include "mpf/geometry.hpp"

namespace mpf {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct TreeConfig {
  double lifetime = std::numeric_limits<double>::infinity();
  std::size_t max_depth = 10;
  double gamma = 1.0;
  std::uint64_t seed = 0;

  // Throws invalid-config when lifetime < 0, max_depth == 0 or gamma <= 0.
  void validate() const;
};

struct TreeNode {
  NodeId parent = kNoNode;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  std::size_t cut_dim = 0;
  double cut_loc = 0.0;
  double time = 0.0;
  // Data bounding box for Mondrian trees; the full cell for Mondrian processes.
  BoundingBox box;
  std::size_t depth = 0;
  std::size_t count = 0;
  // Stored observations; populated on leaves only.
  std::vector<PointId> points;

  bool is_leaf() const noexcept { return left == kNoNode; }
};

// Arena-backed binary tree over a shared point store. Node handles stay valid
// until the node is released.
class MondrianTree {
 public:
  MondrianTree() = default;
  MondrianTree(std::shared_ptr<Matrix> store, std::size_t dims, TreeConfig config);

  NodeId root() const noexcept { return root_; }
  void set_root(NodeId id) noexcept { root_ = id; }
  bool empty() const noexcept { return root_ == kNoNode; }

  const TreeNode& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  TreeNode& node(NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }
  bool is_live(NodeId id) const;
  // One past the largest handle ever allocated.
  std::size_t capacity() const noexcept { return nodes_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size() - free_.size(); }

  NodeId allocate(TreeNode node);
  void release(NodeId id);
  // Releases every descendant of `id` (not `id` itself).
  void release_descendants(NodeId id);

  std::vector<NodeId> preorder() const;
  std::vector<NodeId> preorder(NodeId from) const;
  std::vector<NodeId> leaves() const;
  std::vector<PointId> collect_points(NodeId from) const;
  // Height of the subtree below `id`; 0 for a leaf.
  std::size_t height(NodeId id) const;

  // Leaf reached by following cuts from the root (`x[dim] <= loc` goes left).
  // Box containment is not checked.
  NodeId route(std::span<const double> x) const;
  std::vector<NodeId> route_path(std::span<const double> x) const;

  const Matrix& points() const { return *store_; }
  const std::shared_ptr<Matrix>& store() const noexcept { return store_; }
  void set_store(std::shared_ptr<Matrix> store) { store_ = std::move(store); }
  std::size_t dims() const noexcept { return dims_; }
  const TreeConfig& config() const noexcept { return config_; }

  // Total count of stored observations.
  std::size_t size() const { return empty() ? 0 : node(root_).count; }

 private:
  std::shared_ptr<Matrix> store_;
  std::size_t dims_ = 0;
  TreeConfig config_;
  std::vector<TreeNode> nodes_;
  std::vector<bool> live_;
  std::vector<NodeId> free_;
  NodeId root_ = kNoNode;
};

// Mondrian tree restricted to the data: every node box is the bounding box of
// the points it holds. Stops on lifetime, depth cap, a single point, or a box
// with any zero side.
MondrianTree sample_mondrian_tree(std::shared_ptr<Matrix> store, std::vector<PointId> ids, const TreeConfig& config,
                                  CutPlanner& planner);
MondrianTree sample_mondrian_tree(const Matrix& data, const TreeConfig& config, CutPlanner& planner);

// Truncated Mondrian process on `domain`: node boxes are the cells themselves
// and children tile the parent. Empty cells are not refined further; their
// density is uniform under the volume-proportional prior either way.
MondrianTree sample_mondrian_process(const BoundingBox& domain, std::shared_ptr<Matrix> store,
                                     std::vector<PointId> ids, const TreeConfig& config, CutPlanner& planner);
MondrianTree sample_mondrian_process(const BoundingBox& domain, const Matrix& data, const TreeConfig& config,
                                     CutPlanner& planner);

// Ids 0..n-1.
std::vector<PointId> all_ids(std::size_t n);

}  // namespace mpf
