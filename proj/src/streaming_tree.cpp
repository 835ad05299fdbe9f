#include "mpf/streaming_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpf/error.hpp"

namespace mpf {

std::string_view to_string(LeafType type) {
  switch (type) {
    case LeafType::kRoot: return "root";
    case LeafType::kInternal: return "internal";
    case LeafType::kObservedTypeI: return "observed_type_i";
    case LeafType::kObservedTypeII: return "observed_type_ii";
  }
  return "unknown";
}

double rescaled_node_time(double old_parent_time, double new_parent_time, double time, double old_linear,
                          double new_linear) {
  if (std::isinf(time)) return time;
  if (!(new_linear > 0.0)) return std::numeric_limits<double>::infinity();
  // Written as increments on `time` so an unchanged node keeps its exact value.
  const double shift = new_parent_time - old_parent_time;
  const double wait = time - old_parent_time;
  return time + shift + wait * ((old_linear - new_linear) / new_linear);
}

MpTree::MpTree(std::size_t dims, TreeConfig config, std::shared_ptr<Matrix> store)
    : tree_(store ? std::move(store) : std::make_shared<Matrix>(0, dims), dims, config), rng_(config.seed) {
  config.validate();
}

MpTree MpTree::sample(const Matrix& data, const TreeConfig& config) {
  return sample(std::make_shared<Matrix>(data), all_ids(data.rows()), config, Rng(config.seed));
}

MpTree MpTree::sample(const Matrix& data, const TreeConfig& config, CutPlanner& planner) {
  return sample(std::make_shared<Matrix>(data), all_ids(data.rows()), config, planner);
}

MpTree MpTree::sample(std::shared_ptr<Matrix> store, std::vector<PointId> ids, const TreeConfig& config, Rng rng) {
  RandomCutPlanner planner(rng);
  MondrianTree structure = sample_mondrian_tree(std::move(store), std::move(ids), config, planner);
  return from_structure(std::move(structure), rng);
}

MpTree MpTree::sample(std::shared_ptr<Matrix> store, std::vector<PointId> ids, const TreeConfig& config,
                      CutPlanner& planner) {
  MondrianTree structure = sample_mondrian_tree(std::move(store), std::move(ids), config, planner);
  return from_structure(std::move(structure), Rng(config.seed));
}

MpTree MpTree::from_structure(MondrianTree structure, Rng rng) {
  MpTree out;
  out.tree_ = std::move(structure);
  out.rng_ = rng;
  out.refresh_all();
  return out;
}

MpTree sample_mpt(const Matrix& data, const TreeConfig& config, Rng rng) {
  return MpTree::sample(std::make_shared<Matrix>(data), all_ids(data.rows()), config, rng);
}

void MpTree::refresh_all() {
  params_.assign(tree_.capacity(), MptParams{});
  for (NodeId id : tree_.preorder()) refresh(id);
}

void MpTree::refresh(NodeId id) {
  if (params_.size() < tree_.capacity()) params_.resize(tree_.capacity());
  const TreeNode& node = tree_.node(id);
  const double gamma = tree_.config().gamma;
  MptParams p;
  p.observed_log_volume = node.box.log_volume();
  if (node.parent == kNoNode) {
    p.region_log_volume = p.observed_log_volume;
  } else {
    const TreeNode& parent = tree_.node(node.parent);
    const BoundingBox region = parent.left == id ? parent.box.lower_part(parent.cut_dim, parent.cut_loc)
                                                 : parent.box.upper_part(parent.cut_dim, parent.cut_loc);
    p.region_log_volume = region.log_volume();
    p.restricted = node.box.all_sides_positive();
    if (p.restricted) {
      p.prior_rho = restriction_prior_log(restriction_polya_depth(parent.depth), p.observed_log_volume,
                                          p.region_log_volume, gamma);
      p.rho = p.prior_rho + BetaPair{static_cast<double>(node.count), 0.0};
    }
  }
  if (!node.is_leaf()) {
    const double fraction = (node.cut_loc - node.box.lower(node.cut_dim)) / node.box.side(node.cut_dim);
    p.prior_chi = fraction_prior(cut_polya_depth(node.depth), fraction, gamma);
    p.chi = p.prior_chi + BetaPair{static_cast<double>(tree_.node(node.left).count),
                                   static_cast<double>(tree_.node(node.right).count)};
  }
  params_[static_cast<std::size_t>(id)] = p;
}

void MpTree::refresh_subtree(NodeId id) {
  for (NodeId n : tree_.preorder(id)) refresh(n);
}

void MpTree::refresh_path(const std::vector<NodeId>& path) {
  for (NodeId id : path) {
    refresh(id);
    const TreeNode& node = tree_.node(id);
    if (!node.is_leaf()) {
      refresh(node.left);
      refresh(node.right);
    }
  }
}

void MpTree::shift_depths(NodeId id, long delta) {
  for (NodeId n : tree_.preorder(id)) {
    TreeNode& node = tree_.node(n);
    node.depth = static_cast<std::size_t>(static_cast<long>(node.depth) + delta);
  }
}

void MpTree::shift_times(NodeId id, double delta) {
  const double lifetime = tree_.config().lifetime;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    TreeNode& node = tree_.node(cur);
    if (node.is_leaf()) continue;
    node.time += delta;
    if (!(node.time < lifetime)) {
      contract(cur);
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
}

void MpTree::contract(NodeId id) {
  std::vector<PointId> points = tree_.collect_points(id);
  tree_.release_descendants(id);
  TreeNode& node = tree_.node(id);
  node.left = kNoNode;
  node.right = kNoNode;
  node.cut_dim = 0;
  node.cut_loc = 0.0;
  node.time = tree_.config().lifetime;
  node.points = std::move(points);
}

void MpTree::replace_child(NodeId parent, NodeId old_child, NodeId new_child) {
  if (parent == kNoNode) {
    tree_.set_root(new_child);
    return;
  }
  TreeNode& p = tree_.node(parent);
  if (p.left == old_child) {
    p.left = new_child;
  } else {
    p.right = new_child;
  }
}

// A splice needs depth headroom for the whole subtree, and like the batch
// sampler it never splits a box with a zero side.
bool MpTree::can_splice(NodeId id, std::span<const double> z) const {
  const TreeNode& node = tree_.node(id);
  if (node.depth + 1 + tree_.height(id) > tree_.config().max_depth) return false;
  return node.box.extended(z).all_sides_positive();
}

NodeId MpTree::splice(NodeId below, const Cut& cut, PointId id) {
  const auto z = tree_.points().row(id);
  TreeNode joint;
  joint.parent = tree_.node(below).parent;
  joint.box = tree_.node(below).box.extended(z);
  joint.count = tree_.node(below).count + 1;
  joint.depth = tree_.node(below).depth;
  joint.cut_dim = cut.dim;
  joint.cut_loc = cut.location;
  joint.time = cut.time;
  const NodeId joint_id = tree_.allocate(std::move(joint));

  TreeNode leaf;
  leaf.parent = joint_id;
  leaf.box = BoundingBox::of_point(z);
  leaf.count = 1;
  leaf.points = {id};
  leaf.time = tree_.config().lifetime;
  leaf.depth = tree_.node(below).depth + 1;
  const NodeId leaf_id = tree_.allocate(std::move(leaf));

  const NodeId old_parent = tree_.node(below).parent;
  TreeNode& j = tree_.node(joint_id);
  if (z[cut.dim] > cut.location) {
    j.left = below;
    j.right = leaf_id;
  } else {
    j.left = leaf_id;
    j.right = below;
  }
  replace_child(old_parent, below, joint_id);
  tree_.node(below).parent = joint_id;
  shift_depths(below, 1);
  return joint_id;
}

PointId MpTree::insert(std::span<const double> z) {
  RandomCutPlanner planner(rng_);
  return insert(z, planner);
}

PointId MpTree::insert(std::span<const double> z, CutPlanner& planner) {
  if (z.size() != dims()) throw Error(ErrorCode::kInvalidPoint, "point dimensionality does not match the tree");
  for (double v : z) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidPoint, "point has a non-finite coordinate");
  }
  const PointId id = tree_.store()->append_row(z);
  insert_stored(id, planner);
  return id;
}

void MpTree::insert_stored(PointId id) {
  RandomCutPlanner planner(rng_);
  insert_stored(id, planner);
}

void MpTree::insert_stored(PointId id, CutPlanner& planner) {
  if (id >= tree_.points().rows()) throw Error(ErrorCode::kNotFound, "point id " + std::to_string(id) + " not in store");
  const auto z = tree_.points().row(id);
  if (z.size() != dims()) throw Error(ErrorCode::kInvalidPoint, "point dimensionality does not match the tree");
  for (double v : z) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidPoint, "point has a non-finite coordinate");
  }

  if (tree_.empty()) {
    TreeNode root;
    root.box = BoundingBox::of_point(z);
    root.count = 1;
    root.points = {id};
    root.time = tree_.config().lifetime;
    tree_.set_root(tree_.allocate(std::move(root)));
    refresh(tree_.root());
    return;
  }

  std::vector<NodeId> path;
  NodeId cur = tree_.root();
  double parent_time = 0.0;
  while (true) {
    if (!tree_.node(cur).box.contains(z) && can_splice(cur, z)) {
      const TreeNode& node = tree_.node(cur);
      const ExtendRequest request{node.box, z, parent_time, node.time, node.depth};
      if (const std::optional<Cut> cut = planner.extend(request)) {
        validate_extension(*cut, request);
        refresh_subtree(splice(cur, *cut, id));
        refresh_path(path);
        return;
      }
    }
    TreeNode& node = tree_.node(cur);
    node.box.extend(z);
    ++node.count;
    path.push_back(cur);
    if (node.is_leaf()) {
      node.points.push_back(id);
      break;
    }
    parent_time = node.time;
    cur = z[node.cut_dim] <= node.cut_loc ? node.left : node.right;
  }
  refresh_path(path);
}

void MpTree::remove(PointId id) {
  if (tree_.empty() || id >= tree_.points().rows()) {
    throw Error(ErrorCode::kNotFound, "point id " + std::to_string(id) + " is not stored in the tree");
  }
  const auto z = tree_.points().row(id);
  std::vector<NodeId> path = tree_.route_path(z);
  {
    auto& points = tree_.node(path.back()).points;
    const auto it = std::find(points.begin(), points.end(), id);
    if (it == points.end()) {
      throw Error(ErrorCode::kNotFound, "point id " + std::to_string(id) + " is not stored in the tree");
    }
    points.erase(it);
  }

  std::vector<double> old_linear;
  old_linear.reserve(path.size());
  for (NodeId n : path) {
    old_linear.push_back(tree_.node(n).box.linear_dimension());
    --tree_.node(n).count;
  }

  std::vector<NodeId> moved;
  if (tree_.node(path.back()).count == 0) {
    const NodeId leaf = path.back();
    if (path.size() == 1) {
      tree_.release(leaf);
      tree_.set_root(kNoNode);
      params_.clear();
      return;
    }
    // The parent's cut no longer separates anything: lift the sibling.
    const NodeId parent = path[path.size() - 2];
    const TreeNode& p = tree_.node(parent);
    const NodeId sibling = p.left == leaf ? p.right : p.left;
    const NodeId grandparent = p.parent;
    replace_child(grandparent, parent, sibling);
    tree_.node(sibling).parent = grandparent;
    shift_depths(sibling, -1);
    tree_.release(leaf);
    tree_.release(parent);
    path.resize(path.size() - 2);
    old_linear.resize(path.size());
    moved.push_back(sibling);
  }

  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    TreeNode& node = tree_.node(*it);
    if (node.is_leaf()) {
      node.box = bbox_of(tree_.points(), node.points);
    } else {
      node.box = tree_.node(node.left).box;
      node.box.extend(tree_.node(node.right).box);
    }
  }

  const double lifetime = tree_.config().lifetime;
  double parent_old = 0.0;
  double parent_new = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    TreeNode& node = tree_.node(path[k]);
    if (node.is_leaf()) break;
    const double old_time = node.time;
    const double new_time =
        rescaled_node_time(parent_old, parent_new, old_time, old_linear[k], node.box.linear_dimension());
    if (!(new_time < lifetime) || !node.box.all_sides_positive()) {
      contract(path[k]);
      path.resize(k + 1);
      break;
    }
    node.time = new_time;
    const double delta = new_time - old_time;
    if (delta != 0.0) {
      const NodeId next = k + 1 < path.size() ? path[k + 1] : kNoNode;
      const NodeId left = node.left;
      const NodeId right = node.right;
      if (left != next) shift_times(left, delta);
      if (right != next) shift_times(right, delta);
    }
    parent_old = old_time;
    parent_new = new_time;
  }

  refresh_path(path);
  for (NodeId m : moved) {
    if (tree_.is_live(m)) refresh_subtree(m);
  }
}

LeafQuery MpTree::query(std::span<const double> x) const {
  if (tree_.empty() || !tree_.node(tree_.root()).box.contains(x)) return {};
  double mass = 1.0;
  NodeId cur = tree_.root();
  while (true) {
    const TreeNode& node = tree_.node(cur);
    const MptParams& p = params(cur);
    if (p.restricted) {
      const double mu = p.rho.mean();
      if (!node.box.contains(x)) {
        const double m = mass * (1.0 - mu);
        return {m, density_of(m, log_diff_exp(p.region_log_volume, p.observed_log_volume)), cur,
                RegionKind::kComplement};
      }
      mass *= mu;
    }
    if (node.is_leaf()) {
      const double lv = p.restricted ? p.observed_log_volume : p.region_log_volume;
      return {mass, density_of(mass, lv), cur, RegionKind::kObserved};
    }
    const double mu = p.chi.mean();
    if (x[node.cut_dim] <= node.cut_loc) {
      mass *= mu;
      cur = node.left;
    } else {
      mass *= 1.0 - mu;
      cur = node.right;
    }
  }
}

std::vector<LeafRegion> MpTree::leaves() const {
  std::vector<LeafRegion> out;
  if (tree_.empty()) return out;
  struct Frame {
    NodeId id;
    double mass;
    std::string code;
  };
  std::vector<Frame> stack{{tree_.root(), 1.0, ""}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const TreeNode& node = tree_.node(f.id);
    const MptParams& p = params(f.id);
    double mass = f.mass;
    std::string code = f.code;
    if (p.restricted) {
      const double mu = p.rho.mean();
      const double comp_mass = mass * (1.0 - mu);
      const double comp_lv = log_diff_exp(p.region_log_volume, p.observed_log_volume);
      out.push_back({code + "¬", f.id, RegionKind::kComplement, comp_mass, comp_lv, density_of(comp_mass, comp_lv)});
      mass *= mu;
      code += "∈";
    }
    if (node.is_leaf()) {
      const double lv = p.restricted ? p.observed_log_volume : p.region_log_volume;
      out.push_back({code, f.id, RegionKind::kObserved, mass, lv, density_of(mass, lv)});
      continue;
    }
    const double mu = p.chi.mean();
    stack.push_back({node.right, mass * (1.0 - mu), code + "1"});
    stack.push_back({node.left, mass * mu, code + "0"});
  }
  return out;
}

double MpTree::region_mass(NodeId id) const {
  std::vector<NodeId> chain;
  for (NodeId cur = id; cur != kNoNode; cur = tree_.node(cur).parent) chain.push_back(cur);
  double mass = 1.0;
  for (std::size_t k = chain.size(); k-- > 1;) {
    const NodeId cur = chain[k];
    const NodeId child = chain[k - 1];
    const MptParams& p = params(cur);
    if (p.restricted) mass *= p.rho.mean();
    const double mu = p.chi.mean();
    mass *= tree_.node(cur).left == child ? mu : 1.0 - mu;
  }
  return mass;
}

std::string MpTree::encoding(NodeId id) const {
  std::vector<NodeId> chain;
  for (NodeId cur = id; cur != kNoNode; cur = tree_.node(cur).parent) chain.push_back(cur);
  std::string code;
  for (std::size_t k = chain.size() - 1; k-- > 0;) {
    const NodeId child = chain[k];
    code += tree_.node(chain[k + 1]).left == child ? "0" : "1";
    if (params(child).restricted) code += "∈";
  }
  return code;
}

LeafType MpTree::leaf_type(NodeId id) const {
  const TreeNode& node = tree_.node(id);
  if (node.parent == kNoNode) return LeafType::kRoot;
  if (!node.is_leaf()) return LeafType::kInternal;
  return params(id).restricted ? LeafType::kObservedTypeII : LeafType::kObservedTypeI;
}

bool MpTree::contains(PointId id) const {
  if (tree_.empty() || id >= tree_.points().rows()) return false;
  const auto& points = tree_.node(tree_.route(tree_.points().row(id))).points;
  return std::find(points.begin(), points.end(), id) != points.end();
}

}  // namespace mpf
