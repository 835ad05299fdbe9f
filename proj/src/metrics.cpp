#include "mpf/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "mpf/error.hpp"

namespace mpf {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::kUsage, "scores and labels differ in length");
  std::size_t n_anom = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw Error(ErrorCode::kInvalidData, "labels must be 0 or 1");
    n_anom += static_cast<std::size_t>(l);
  }
  const std::size_t n_norm = labels.size() - n_anom;
  if (n_anom == 0 || n_norm == 0) throw Error(ErrorCode::kUndefinedAuc, "AUC needs both anomalies and normal points");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Rank sum of the normal points with mid-ranks for ties.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 0) rank_sum += mid_rank;
    }
    i = j;
  }
  const double nn = static_cast<double>(n_norm);
  const double u = rank_sum - nn * (nn + 1.0) / 2.0;
  return u / (nn * static_cast<double>(n_anom));
}

}  // namespace mpf
