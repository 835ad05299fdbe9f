#pragma once

#include <span>

namespace mpf {

// Mann-Whitney AUC for scores where lower means more anomalous: the chance a
// random anomaly scores below a random normal point, ties counting one half.
// Throws undefined-auc unless both classes are present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace mpf
