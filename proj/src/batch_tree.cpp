#include "mpf/batch_tree.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mpf/error.hpp"

namespace mpf {

double density_of(double mass, double log_volume) {
  if (mass <= 0.0) return 0.0;
  if (log_volume == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
  return std::exp(std::log(mass) - log_volume);
}

BatchTree BatchTree::fit(MondrianTree partition, double gamma) {
  if (partition.empty()) throw Error(ErrorCode::kEmptyInput, "cannot fit an empty partition");
  if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidConfig, "gamma must be positive");
  BatchTree out;
  out.tree_ = std::move(partition);
  out.gamma_ = gamma;
  out.propagate();
  return out;
}

BatchTree BatchTree::fit(MondrianTree partition, const Matrix& data, double gamma) {
  if (partition.empty()) throw Error(ErrorCode::kEmptyInput, "cannot fit an empty partition");
  for (NodeId id : partition.preorder()) {
    partition.node(id).count = 0;
    partition.node(id).points.clear();
  }
  const BoundingBox root_box = partition.node(partition.root()).box;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto x = data.row(i);
    if (!root_box.contains(x)) {
      throw Error(ErrorCode::kOutOfDomain, "row " + std::to_string(i) + " lies outside the tree domain");
    }
    for (NodeId id : partition.route_path(x)) ++partition.node(id).count;
  }
  return fit(std::move(partition), gamma);
}

BatchTree BatchTree::restore(MondrianTree partition, double gamma, std::vector<NodeParams> params) {
  BatchTree out;
  out.tree_ = std::move(partition);
  out.gamma_ = gamma;
  out.params_ = std::move(params);
  out.params_.resize(out.tree_.capacity());
  return out;
}

void BatchTree::propagate() {
  params_.assign(tree_.capacity(), NodeParams{});
  params_[static_cast<std::size_t>(tree_.root())].mass = 1.0;
  for (NodeId id : tree_.preorder()) {
    const TreeNode& node = tree_.node(id);
    if (node.is_leaf()) continue;
    NodeParams& p = params_[static_cast<std::size_t>(id)];
    const double h = node.box.side(node.cut_dim);
    const double fraction = (node.cut_loc - node.box.lower(node.cut_dim)) / h;
    p.prior = fraction_prior(node.depth, fraction, gamma_);
    p.posterior = p.prior + BetaPair{static_cast<double>(tree_.node(node.left).count),
                                     static_cast<double>(tree_.node(node.right).count)};
    const double mu = p.posterior.mean();
    params_[static_cast<std::size_t>(node.left)].mass = p.mass * mu;
    params_[static_cast<std::size_t>(node.right)].mass = p.mass * (1.0 - mu);
  }
}

LeafQuery BatchTree::query(std::span<const double> x) const {
  if (tree_.empty() || !domain().contains(x)) return {};
  const NodeId leaf = tree_.route(x);
  const double mass = params(leaf).mass;
  return {mass, density_of(mass, tree_.node(leaf).box.log_volume()), leaf, RegionKind::kObserved};
}

double BatchTree::density(std::span<const double> x) const {
  const LeafQuery q = query(x);
  if (!q.in_domain()) throw Error(ErrorCode::kOutOfDomain, "query point lies outside the batch tree domain");
  return q.density;
}

double BatchTree::leaf_mass(std::span<const double> x) const { return query(x).mass; }

std::vector<LeafRegion> BatchTree::leaves() const {
  std::vector<LeafRegion> out;
  if (tree_.empty()) return out;
  // Encodings follow the cut sides from the root.
  std::vector<std::string> codes(tree_.capacity());
  for (NodeId id : tree_.preorder()) {
    const TreeNode& node = tree_.node(id);
    if (node.is_leaf()) {
      const double lv = node.box.log_volume();
      const double mass = params(id).mass;
      out.push_back({codes[static_cast<std::size_t>(id)], id, RegionKind::kObserved, mass, lv, density_of(mass, lv)});
    } else {
      codes[static_cast<std::size_t>(node.left)] = codes[static_cast<std::size_t>(id)] + "0";
      codes[static_cast<std::size_t>(node.right)] = codes[static_cast<std::size_t>(id)] + "1";
    }
  }
  return out;
}

BatchTree fit_bmpt(MondrianTree partition, const Matrix& data, double gamma) {
  return BatchTree::fit(std::move(partition), data, gamma);
}

double bmpt_density(const BatchTree& tree, std::span<const double> x) { return tree.density(x); }

}  // namespace mpf
