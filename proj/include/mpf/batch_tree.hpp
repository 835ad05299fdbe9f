#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mpf/mondrian.hpp"
#include "mpf/polya.hpp"
#include "mpf/query.hpp"

namespace mpf {

// Batch Mondrian Polya tree: a finite Polya tree over a Mondrian process
// partition. Every cell is a node box, so all volumes are those of the cells.
class BatchTree {
 public:
  struct NodeParams {
    BetaPair prior;
    BetaPair posterior;
    // Mass of the cell.
    double mass = 0.0;
  };

  BatchTree() = default;

  // Uses the counts already routed into `partition` by the sampler.
  static BatchTree fit(MondrianTree partition, double gamma);
  // Re-routes `data` through the partition before fitting.
  static BatchTree fit(MondrianTree partition, const Matrix& data, double gamma);
  // Restores a fitted tree whose parameters were saved elsewhere.
  static BatchTree restore(MondrianTree partition, double gamma, std::vector<NodeParams> params);

  const MondrianTree& partition() const noexcept { return tree_; }
  const BoundingBox& domain() const { return tree_.node(tree_.root()).box; }
  const NodeParams& params(NodeId id) const { return params_[static_cast<std::size_t>(id)]; }
  double gamma() const noexcept { return gamma_; }

  // Outside the domain the tree defines no density: kind == kOutside, mass 0.
  LeafQuery query(std::span<const double> x) const;
  // Throws out-of-domain for points outside the domain.
  double density(std::span<const double> x) const;
  double leaf_mass(std::span<const double> x) const;

  std::vector<LeafRegion> leaves() const;

 private:
  void propagate();

  MondrianTree tree_;
  double gamma_ = 1.0;
  std::vector<NodeParams> params_;
};

BatchTree fit_bmpt(MondrianTree partition, const Matrix& data, double gamma);
double bmpt_density(const BatchTree& tree, std::span<const double> x);

}  // namespace mpf
