#include "mpf/mondrian.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "mpf/error.hpp"

namespace mpf {

void TreeConfig::validate() const {
  // A zero budget is accepted and yields a root-only tree.
  if (!(lifetime >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "lifetime must be non-negative");
  if (max_depth < 1) throw Error(ErrorCode::kInvalidConfig, "max_depth must be at least 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::kInvalidConfig, "gamma must be positive");
}

MondrianTree::MondrianTree(std::shared_ptr<Matrix> store, std::size_t dims, TreeConfig config)
    : store_(std::move(store)), dims_(dims), config_(config) {}

bool MondrianTree::is_live(NodeId id) const {
  return id >= 0 && static_cast<std::size_t>(id) < nodes_.size() && live_[static_cast<std::size_t>(id)];
}

NodeId MondrianTree::allocate(TreeNode node) {
  if (!free_.empty()) {
    const NodeId id = free_.back();
    free_.pop_back();
    nodes_[static_cast<std::size_t>(id)] = std::move(node);
    live_[static_cast<std::size_t>(id)] = true;
    return id;
  }
  nodes_.push_back(std::move(node));
  live_.push_back(true);
  return static_cast<NodeId>(nodes_.size() - 1);
}

void MondrianTree::release(NodeId id) {
  nodes_[static_cast<std::size_t>(id)] = TreeNode{};
  live_[static_cast<std::size_t>(id)] = false;
  free_.push_back(id);
}

void MondrianTree::release_descendants(NodeId id) {
  std::vector<NodeId> stack;
  if (!node(id).is_leaf()) {
    stack.push_back(node(id).left);
    stack.push_back(node(id).right);
  }
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    if (!node(cur).is_leaf()) {
      stack.push_back(node(cur).left);
      stack.push_back(node(cur).right);
    }
    release(cur);
  }
}

std::vector<NodeId> MondrianTree::preorder() const {
  if (empty()) return {};
  return preorder(root_);
}

std::vector<NodeId> MondrianTree::preorder(NodeId from) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    if (!node(cur).is_leaf()) {
      stack.push_back(node(cur).right);
      stack.push_back(node(cur).left);
    }
  }
  return out;
}

std::vector<NodeId> MondrianTree::leaves() const {
  std::vector<NodeId> out;
  for (NodeId id : preorder()) {
    if (node(id).is_leaf()) out.push_back(id);
  }
  return out;
}

std::vector<PointId> MondrianTree::collect_points(NodeId from) const {
  std::vector<PointId> out;
  for (NodeId id : preorder(from)) {
    const auto& pts = node(id).points;
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

std::size_t MondrianTree::height(NodeId id) const {
  const TreeNode& n = node(id);
  if (n.is_leaf()) return 0;
  return 1 + std::max(height(n.left), height(n.right));
}

NodeId MondrianTree::route(std::span<const double> x) const {
  NodeId cur = root_;
  while (cur != kNoNode && !node(cur).is_leaf()) {
    const TreeNode& n = node(cur);
    cur = x[n.cut_dim] <= n.cut_loc ? n.left : n.right;
  }
  return cur;
}

std::vector<NodeId> MondrianTree::route_path(std::span<const double> x) const {
  std::vector<NodeId> path;
  NodeId cur = root_;
  while (cur != kNoNode) {
    path.push_back(cur);
    const TreeNode& n = node(cur);
    if (n.is_leaf()) break;
    cur = x[n.cut_dim] <= n.cut_loc ? n.left : n.right;
  }
  return path;
}

std::vector<PointId> all_ids(std::size_t n) {
  std::vector<PointId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<PointId>(i);
  return ids;
}

namespace {

struct BuildTask {
  std::vector<PointId> ids;
  BoundingBox cell;  // used by the process sampler only
  NodeId parent;
  bool is_left;
  std::size_t depth;
  double parent_time;
};

void link(MondrianTree& tree, NodeId id, NodeId parent, bool is_left) {
  if (parent == kNoNode) {
    tree.set_root(id);
  } else if (is_left) {
    tree.node(parent).left = id;
  } else {
    tree.node(parent).right = id;
  }
}

void check_store(const std::shared_ptr<Matrix>& store, const std::vector<PointId>& ids) {
  if (!store) throw Error(ErrorCode::kEmptyInput, "no point store");
  for (PointId id : ids) {
    if (id >= store->rows()) throw Error(ErrorCode::kInvalidData, "point id " + std::to_string(id) + " out of range");
    for (double v : store->row(id)) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidData, "non-finite value in row " + std::to_string(id));
      }
    }
  }
}

}  // namespace

MondrianTree sample_mondrian_tree(std::shared_ptr<Matrix> store, std::vector<PointId> ids, const TreeConfig& config,
                                  CutPlanner& planner) {
  config.validate();
  if (ids.empty()) throw Error(ErrorCode::kEmptyInput, "cannot sample a Mondrian tree on no data");
  check_store(store, ids);
  const Matrix& data = *store;
  MondrianTree tree(store, data.cols(), config);

  std::vector<BuildTask> stack;
  stack.push_back(BuildTask{std::move(ids), {}, kNoNode, true, 0, 0.0});
  while (!stack.empty()) {
    BuildTask task = std::move(stack.back());
    stack.pop_back();

    TreeNode node;
    node.parent = task.parent;
    node.depth = task.depth;
    node.box = bbox_of(data, task.ids);
    node.count = task.ids.size();

    std::optional<Cut> cut;
    if (task.ids.size() >= 2 && task.depth < config.max_depth && node.box.all_sides_positive()) {
      const SplitRequest request{node.box, task.parent_time, config.lifetime, task.depth};
      cut = planner.split(request);
      if (cut) validate_split(*cut, request);
    }

    if (!cut) {
      node.time = config.lifetime;
      node.points = std::move(task.ids);
      link(tree, tree.allocate(std::move(node)), task.parent, task.is_left);
      continue;
    }

    node.cut_dim = cut->dim;
    node.cut_loc = cut->location;
    node.time = cut->time;
    std::vector<PointId> left_ids;
    std::vector<PointId> right_ids;
    for (PointId id : task.ids) {
      (data(id, cut->dim) <= cut->location ? left_ids : right_ids).push_back(id);
    }
    if (left_ids.empty() || right_ids.empty()) {
      throw Error(ErrorCode::kInvalidScript, "cut does not separate the node's points");
    }
    const NodeId id = tree.allocate(std::move(node));
    link(tree, id, task.parent, task.is_left);
    // Right pushed first so the left subtree is built (and asks the planner) first.
    stack.push_back(BuildTask{std::move(right_ids), {}, id, false, task.depth + 1, cut->time});
    stack.push_back(BuildTask{std::move(left_ids), {}, id, true, task.depth + 1, cut->time});
  }
  return tree;
}

MondrianTree sample_mondrian_tree(const Matrix& data, const TreeConfig& config, CutPlanner& planner) {
  return sample_mondrian_tree(std::make_shared<Matrix>(data), all_ids(data.rows()), config, planner);
}

MondrianTree sample_mondrian_process(const BoundingBox& domain, std::shared_ptr<Matrix> store,
                                     std::vector<PointId> ids, const TreeConfig& config, CutPlanner& planner) {
  config.validate();
  check_store(store, ids);
  const Matrix& data = *store;
  if (!ids.empty() && data.cols() != domain.dims()) {
    throw Error(ErrorCode::kInvalidData, "data and domain dimensionality differ");
  }
  for (PointId id : ids) {
    if (!domain.contains(data.row(id))) {
      throw Error(ErrorCode::kOutOfDomain, "row " + std::to_string(id) + " lies outside the domain");
    }
  }
  MondrianTree tree(store, domain.dims(), config);

  std::vector<BuildTask> stack;
  stack.push_back(BuildTask{std::move(ids), domain, kNoNode, true, 0, 0.0});
  while (!stack.empty()) {
    BuildTask task = std::move(stack.back());
    stack.pop_back();

    TreeNode node;
    node.parent = task.parent;
    node.depth = task.depth;
    node.box = task.cell;
    node.count = task.ids.size();

    std::optional<Cut> cut;
    if (!task.ids.empty() && task.depth < config.max_depth) {
      const SplitRequest request{node.box, task.parent_time, config.lifetime, task.depth};
      cut = planner.split(request);
      if (cut) validate_split(*cut, request);
    }

    if (!cut) {
      node.time = config.lifetime;
      node.points = std::move(task.ids);
      link(tree, tree.allocate(std::move(node)), task.parent, task.is_left);
      continue;
    }

    node.cut_dim = cut->dim;
    node.cut_loc = cut->location;
    node.time = cut->time;
    std::vector<PointId> left_ids;
    std::vector<PointId> right_ids;
    for (PointId id : task.ids) {
      (data(id, cut->dim) <= cut->location ? left_ids : right_ids).push_back(id);
    }
    BoundingBox left_cell = task.cell.lower_part(cut->dim, cut->location);
    BoundingBox right_cell = task.cell.upper_part(cut->dim, cut->location);
    const NodeId id = tree.allocate(std::move(node));
    link(tree, id, task.parent, task.is_left);
    stack.push_back(BuildTask{std::move(right_ids), std::move(right_cell), id, false, task.depth + 1, cut->time});
    stack.push_back(BuildTask{std::move(left_ids), std::move(left_cell), id, true, task.depth + 1, cut->time});
  }
  return tree;
}

MondrianTree sample_mondrian_process(const BoundingBox& domain, const Matrix& data, const TreeConfig& config,
                                     CutPlanner& planner) {
  return sample_mondrian_process(domain, std::make_shared<Matrix>(data), all_ids(data.rows()), config, planner);
}

}  // namespace mpf
