#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mpf/dataset.hpp"
#include "mpf/forest.hpp"

namespace mpf {

enum class ScaleMode { kAuto, kOn, kOff };
// How per-tree results become one score: mean leaf mass, the fraction of
// trees that do not vote the point an epsilon-anomaly, or mean density.
enum class Aggregate { kMass, kVote, kDensity };

ScaleMode parse_scale_mode(std::string_view text);
Aggregate parse_aggregate(std::string_view text);

struct EvalOptions {
  ForestConfig forest;
  // 0 disables shingling.
  std::size_t shingle = 0;
  ScaleMode scale = ScaleMode::kAuto;
  Aggregate aggregate = Aggregate::kMass;
};

struct EvalResult {
  double auc = 0.0;
  std::size_t n_points = 0;
  std::size_t dims = 0;
  std::size_t n_anomalies = 0;
  std::size_t n_trees = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
};

// Shingling (univariate input only) then MinMax scaling; auto scales iff D >= 50.
Dataset preprocess(const Dataset& data, std::size_t shingle_width, ScaleMode scale);

// Lower is more anomalous.
std::vector<double> anomaly_scores(const Forest& forest, const Matrix& points, Aggregate aggregate);

// Fits an unsupervised forest on the preprocessed rows and ranks them.
EvalResult evaluate_auc(const Dataset& data, const EvalOptions& options);

}  // namespace mpf
