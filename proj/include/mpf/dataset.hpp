#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mpf/geometry.hpp"

namespace mpf {

struct Dataset {
  Matrix rows;
  // 1 marks an anomaly; empty when the source carries no labels.
  std::vector<int> labels;
  std::vector<std::string> columns;

  bool labeled() const noexcept { return !labels.empty(); }
  std::size_t n_anomalies() const;
};

// Reads a comma-separated numeric table. A first line with any non-numeric
// field is taken as a header. `label_column` is a header name or a 0-based
// index; that column must hold 0/1 and is split out into `labels`.
Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column = std::nullopt);
Dataset parse_csv(const std::string& text, const std::optional<std::string>& label_column = std::nullopt,
                  const std::string& source = "<input>");

// Writes the rows (and a trailing `label` column when labeled) with a header.
void write_csv(const std::string& path, const Dataset& data);
void write_csv(std::ostream& out, const Dataset& data);

// Overlapping windows of the series, stride 1.
Matrix shingle(const std::vector<double>& series, std::size_t width);
// Window labels: a window takes the label of its last point.
std::vector<int> shingle_labels(const std::vector<int>& labels, std::size_t width);

// Per-column (x - min) / (max - min); constant columns become 0.
Matrix minmax_scale(const Matrix& data);

}  // namespace mpf
