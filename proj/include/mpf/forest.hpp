#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mpf/batch_tree.hpp"
#include "mpf/streaming_tree.hpp"

namespace mpf {

enum class ModelKind { kBatch, kStreaming };

std::string_view to_string(ModelKind kind);
// Accepts "batch" or "streaming"; throws usage otherwise.
ModelKind parse_model_kind(std::string_view text);

struct ForestConfig {
  TreeConfig tree;
  std::size_t n_trees = 100;
  ModelKind kind = ModelKind::kStreaming;
  double epsilon = 0.01;
  double phi = 0.5;

  void validate() const;
};

struct ScoreReport {
  double mass = 0.0;
  double density = 0.0;
  bool flag = false;
  std::size_t votes = 0;
};

// Trees needed for an (epsilon, phi)-anomaly: ceil(phi * n_trees), 0 at phi = 0.
std::size_t required_votes(std::size_t n_trees, double phi);

bool epsilon_anomaly(const BatchTree& tree, std::span<const double> x, double epsilon);
bool epsilon_anomaly(const MpTree& tree, std::span<const double> x, double epsilon);

class Forest {
 public:
  Forest() = default;

  // Tree i draws from Rng::fork(config.tree.seed, i). Batch trees partition
  // the bounding box of `data`.
  static Forest fit(const Matrix& data, const ForestConfig& config);

  static Forest from_batch(ForestConfig config, std::vector<BatchTree> trees);
  // Streaming trees must all reference `store`.
  static Forest from_streaming(ForestConfig config, std::shared_ptr<Matrix> store, std::vector<MpTree> trees);

  ModelKind kind() const noexcept { return config_.kind; }
  const ForestConfig& config() const noexcept { return config_; }
  ForestConfig& mutable_config() noexcept { return config_; }
  std::size_t size() const noexcept;
  std::size_t dims() const noexcept { return dims_; }

  // Root box of tree i; nullopt for a streaming tree emptied by deletions.
  std::optional<BoundingBox> tree_domain(std::size_t i) const;

  // Leaf query in tree i.
  LeafQuery tree_query(std::size_t i, std::span<const double> x) const;

  // Mean of per-tree densities; trees whose domain misses x contribute 0.
  double density(std::span<const double> x) const;
  // Mean leaf mass; lower is more anomalous.
  double mass_score(std::span<const double> x) const;
  ScoreReport score(std::span<const double> x) const { return score(x, config_.epsilon, config_.phi); }
  ScoreReport score(std::span<const double> x, double epsilon, double phi) const;
  // Fraction of trees voting x an epsilon-anomaly.
  double vote_fraction(std::span<const double> x, double epsilon) const;

  // Streaming forests only; throws usage for batch forests.
  PointId insert(std::span<const double> z);
  void remove(PointId id);

  const std::vector<BatchTree>& batch_trees() const noexcept { return batch_; }
  const std::vector<MpTree>& streaming_trees() const noexcept { return streaming_; }
  const std::shared_ptr<Matrix>& store() const noexcept { return store_; }

 private:
  void require_streaming(const char* what) const;

  ForestConfig config_;
  std::size_t dims_ = 0;
  std::vector<BatchTree> batch_;
  std::vector<MpTree> streaming_;
  std::shared_ptr<Matrix> store_;
};

}  // namespace mpf
