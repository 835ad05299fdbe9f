#include "mpf/forest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpf/error.hpp"

namespace mpf {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::kBatch ? "batch" : "streaming"; }

ModelKind parse_model_kind(std::string_view text) {
  if (text == "batch") return ModelKind::kBatch;
  if (text == "streaming") return ModelKind::kStreaming;
  throw Error(ErrorCode::kUsage, "unknown model kind '" + std::string(text) + "' (expected batch or streaming)");
}

void ForestConfig::validate() const {
  tree.validate();
  if (n_trees == 0) throw Error(ErrorCode::kInvalidConfig, "n_trees must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "epsilon must lie in [0, 1]");
  if (!(phi >= 0.0 && phi <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "phi must lie in [0, 1]");
}

std::size_t required_votes(std::size_t n_trees, double phi) {
  if (phi <= 0.0) return 0;
  const double target = phi * static_cast<double>(n_trees);
  // phi * n is often an integer spoiled by rounding (0.3 * 10).
  const double nearest = std::round(target);
  if (std::abs(target - nearest) <= 1e-9 * std::max(1.0, target)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(target));
}

bool epsilon_anomaly(const BatchTree& tree, std::span<const double> x, double epsilon) {
  return tree.leaf_mass(x) <= epsilon;
}

bool epsilon_anomaly(const MpTree& tree, std::span<const double> x, double epsilon) {
  return tree.leaf_mass(x) <= epsilon;
}

Forest Forest::fit(const Matrix& data, const ForestConfig& config) {
  config.validate();
  if (data.empty()) throw Error(ErrorCode::kEmptyInput, "cannot fit a forest on an empty dataset");
  data.require_finite();
  Forest out;
  out.config_ = config;
  out.dims_ = data.cols();
  out.store_ = std::make_shared<Matrix>(data);
  const std::vector<PointId> ids = all_ids(data.rows());
  if (config.kind == ModelKind::kBatch) {
    const BoundingBox domain = bbox_of(data);
    out.batch_.reserve(config.n_trees);
    for (std::size_t i = 0; i < config.n_trees; ++i) {
      Rng rng = Rng::fork(config.tree.seed, i);
      RandomCutPlanner planner(rng);
      out.batch_.push_back(
          BatchTree::fit(sample_mondrian_process(domain, out.store_, ids, config.tree, planner), config.tree.gamma));
    }
  } else {
    out.streaming_.reserve(config.n_trees);
    for (std::size_t i = 0; i < config.n_trees; ++i) {
      out.streaming_.push_back(MpTree::sample(out.store_, ids, config.tree, Rng::fork(config.tree.seed, i)));
    }
  }
  return out;
}

Forest Forest::from_batch(ForestConfig config, std::vector<BatchTree> trees) {
  if (trees.empty()) throw Error(ErrorCode::kInvalidConfig, "a forest needs at least one tree");
  Forest out;
  config.kind = ModelKind::kBatch;
  config.n_trees = trees.size();
  out.config_ = config;
  out.dims_ = trees.front().partition().dims();
  out.batch_ = std::move(trees);
  return out;
}

Forest Forest::from_streaming(ForestConfig config, std::shared_ptr<Matrix> store, std::vector<MpTree> trees) {
  if (trees.empty()) throw Error(ErrorCode::kInvalidConfig, "a forest needs at least one tree");
  Forest out;
  config.kind = ModelKind::kStreaming;
  config.n_trees = trees.size();
  out.config_ = config;
  out.dims_ = trees.front().dims();
  out.store_ = std::move(store);
  out.streaming_ = std::move(trees);
  return out;
}

std::size_t Forest::size() const noexcept {
  return config_.kind == ModelKind::kBatch ? batch_.size() : streaming_.size();
}

std::optional<BoundingBox> Forest::tree_domain(std::size_t i) const {
  if (config_.kind == ModelKind::kBatch) return batch_[i].domain();
  const MondrianTree& s = streaming_[i].structure();
  if (s.empty()) return std::nullopt;
  return s.node(s.root()).box;
}

LeafQuery Forest::tree_query(std::size_t i, std::span<const double> x) const {
  return config_.kind == ModelKind::kBatch ? batch_[i].query(x) : streaming_[i].query(x);
}

double Forest::density(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) sum += tree_query(i, x).density;
  return sum / static_cast<double>(size());
}

double Forest::mass_score(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) sum += tree_query(i, x).mass;
  return sum / static_cast<double>(size());
}

ScoreReport Forest::score(std::span<const double> x, double epsilon, double phi) const {
  ScoreReport report;
  double mass = 0.0;
  double density = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const LeafQuery q = tree_query(i, x);
    mass += q.mass;
    density += q.density;
    if (q.mass <= epsilon) ++report.votes;
  }
  report.mass = mass / static_cast<double>(size());
  report.density = density / static_cast<double>(size());
  report.flag = report.votes >= required_votes(size(), phi);
  return report;
}

double Forest::vote_fraction(std::span<const double> x, double epsilon) const {
  std::size_t votes = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (tree_query(i, x).mass <= epsilon) ++votes;
  }
  return static_cast<double>(votes) / static_cast<double>(size());
}

void Forest::require_streaming(const char* what) const {
  if (config_.kind != ModelKind::kStreaming) {
    throw Error(ErrorCode::kUsage, std::string(what) + " requires a streaming forest");
  }
}

PointId Forest::insert(std::span<const double> z) {
  require_streaming("insert");
  if (z.size() != dims_) throw Error(ErrorCode::kInvalidPoint, "point dimensionality does not match the forest");
  for (double v : z) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidPoint, "point has a non-finite coordinate");
  }
  const PointId id = store_->append_row(z);
  for (MpTree& tree : streaming_) tree.insert_stored(id);
  return id;
}

void Forest::remove(PointId id) {
  require_streaming("delete");
  if (streaming_.empty() || !streaming_.front().contains(id)) {
    throw Error(ErrorCode::kNotFound, "point id " + std::to_string(id) + " is not stored in the forest");
  }
  for (MpTree& tree : streaming_) tree.remove(id);
}

}  // namespace mpf
