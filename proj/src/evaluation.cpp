#include "mpf/evaluation.hpp"

#include <chrono>
#include <string>

#include "mpf/error.hpp"
#include "mpf/metrics.hpp"

namespace mpf {

ScaleMode parse_scale_mode(std::string_view text) {
  if (text == "auto") return ScaleMode::kAuto;
  if (text == "on") return ScaleMode::kOn;
  if (text == "off") return ScaleMode::kOff;
  throw Error(ErrorCode::kUsage, "scale mode must be auto, on or off, got '" + std::string(text) + "'");
}

Aggregate parse_aggregate(std::string_view text) {
  if (text == "mass") return Aggregate::kMass;
  if (text == "vote") return Aggregate::kVote;
  if (text == "density") return Aggregate::kDensity;
  throw Error(ErrorCode::kUsage, "aggregate must be mass, vote or density, got '" + std::string(text) + "'");
}

Dataset preprocess(const Dataset& data, std::size_t shingle_width, ScaleMode scale) {
  Dataset out = data;
  if (shingle_width > 0) {
    if (data.rows.cols() != 1) {
      throw Error(ErrorCode::kUsage, "shingling needs a univariate series, got " + std::to_string(data.rows.cols()) +
                                         " columns");
    }
    out.rows = shingle(data.rows.data(), shingle_width);
    if (data.labeled()) out.labels = shingle_labels(data.labels, shingle_width);
    out.columns.clear();
    for (std::size_t j = 0; j < shingle_width; ++j) out.columns.push_back("w" + std::to_string(j));
  }
  const bool scale_on = scale == ScaleMode::kOn || (scale == ScaleMode::kAuto && out.rows.cols() >= 50);
  if (scale_on) out.rows = minmax_scale(out.rows);
  return out;
}

std::vector<double> anomaly_scores(const Forest& forest, const Matrix& points, Aggregate aggregate) {
  std::vector<double> scores(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto x = points.row(i);
    switch (aggregate) {
      case Aggregate::kMass: scores[i] = forest.mass_score(x); break;
      case Aggregate::kVote: scores[i] = 1.0 - forest.vote_fraction(x, forest.config().epsilon); break;
      case Aggregate::kDensity: scores[i] = forest.density(x); break;
    }
  }
  return scores;
}

EvalResult evaluate_auc(const Dataset& data, const EvalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (!data.labeled()) throw Error(ErrorCode::kUsage, "AUC evaluation needs a label column");
  const Dataset prepared = preprocess(data, options.shingle, options.scale);
  const Forest forest = Forest::fit(prepared.rows, options.forest);
  const std::vector<double> scores = anomaly_scores(forest, prepared.rows, options.aggregate);
  EvalResult result;
  result.auc = roc_auc(scores, prepared.labels);
  result.n_points = prepared.rows.rows();
  result.dims = prepared.rows.cols();
  result.n_anomalies = prepared.n_anomalies();
  result.n_trees = forest.size();
  result.seed = options.forest.tree.seed;
  result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace mpf
