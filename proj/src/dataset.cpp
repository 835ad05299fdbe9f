#include "mpf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string_view>

#include "mpf/error.hpp"

namespace mpf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

std::string located(const std::string& source, std::size_t line, std::size_t column) {
  return source + ": row " + std::to_string(line) + ", column " + std::to_string(column + 1);
}

}  // namespace

std::size_t Dataset::n_anomalies() const { return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1)); }

Dataset parse_csv(const std::string& text, const std::optional<std::string>& label_column, const std::string& source) {
  std::vector<std::vector<std::string_view>> records;
  std::vector<std::size_t> line_numbers;
  std::string_view rest(text);
  std::size_t line_no = 0;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    const std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    records.push_back(split_fields(line));
    line_numbers.push_back(line_no);
  }
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, source + ": no data rows");

  Dataset out;
  std::size_t first = 0;
  const bool header = std::any_of(records.front().begin(), records.front().end(),
                                  [](std::string_view f) { return !parse_number(f).has_value(); });
  const std::size_t width = records.front().size();
  if (header) {
    for (std::string_view f : records.front()) out.columns.emplace_back(f);
    first = 1;
  }
  if (first >= records.size()) throw Error(ErrorCode::kEmptyInput, source + ": no data rows");

  std::optional<std::size_t> label_index;
  if (label_column) {
    const auto named = std::find(out.columns.begin(), out.columns.end(), *label_column);
    if (named != out.columns.end()) {
      label_index = static_cast<std::size_t>(named - out.columns.begin());
    } else {
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(label_column->data(), label_column->data() + label_column->size(), idx);
      if (ec != std::errc() || ptr != label_column->data() + label_column->size() || idx >= width) {
        throw Error(ErrorCode::kUsage, source + ": no label column '" + *label_column + "'");
      }
      label_index = idx;
    }
  }

  const std::size_t cols = width - (label_index ? 1 : 0);
  if (cols == 0) throw Error(ErrorCode::kEmptyInput, source + ": no feature columns");
  std::vector<double> values;
  values.reserve((records.size() - first) * cols);
  for (std::size_t r = first; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != width) {
      throw Error(ErrorCode::kParse, source + ": row " + std::to_string(line_numbers[r]) + " has " +
                                         std::to_string(rec.size()) + " fields, expected " + std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      const std::optional<double> v = parse_number(rec[c]);
      if (!v) {
        throw Error(ErrorCode::kParse,
                    located(source, line_numbers[r], c) + ": cannot parse '" + std::string(rec[c]) + "' as a number");
      }
      if (!std::isfinite(*v)) {
        throw Error(ErrorCode::kInvalidData, located(source, line_numbers[r], c) + ": non-finite value");
      }
      if (label_index && c == *label_index) {
        if (*v != 0.0 && *v != 1.0) {
          throw Error(ErrorCode::kInvalidData, located(source, line_numbers[r], c) + ": label must be 0 or 1");
        }
        out.labels.push_back(static_cast<int>(*v));
      } else {
        values.push_back(*v);
      }
    }
  }
  if (label_index && !out.columns.empty()) out.columns.erase(out.columns.begin() + static_cast<long>(*label_index));
  out.rows = Matrix(records.size() - first, cols, std::move(values));
  return out;
}

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), label_column, path);
}

void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  write_csv(out, data);
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t c = 0; c < data.rows.cols(); ++c) {
    if (c) out << ',';
    out << (c < data.columns.size() ? data.columns[c] : "x" + std::to_string(c));
  }
  if (data.labeled()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < data.rows.rows(); ++i) {
    for (std::size_t c = 0; c < data.rows.cols(); ++c) {
      if (c) out << ',';
      out << data.rows(i, c);
    }
    if (data.labeled()) out << ',' << data.labels[i];
    out << '\n';
  }
}

Matrix shingle(const std::vector<double>& series, std::size_t width) {
  if (width == 0) throw Error(ErrorCode::kUsage, "shingle width must be positive");
  if (series.size() < width) {
    throw Error(ErrorCode::kTooShort, "series of length " + std::to_string(series.size()) +
                                          " is shorter than the shingle width " + std::to_string(width));
  }
  const std::size_t rows = series.size() - width + 1;
  Matrix out(rows, width);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < width; ++j) out(i, j) = series[i + j];
  }
  return out;
}

std::vector<int> shingle_labels(const std::vector<int>& labels, std::size_t width) {
  if (width == 0) throw Error(ErrorCode::kUsage, "shingle width must be positive");
  if (labels.size() < width) throw Error(ErrorCode::kTooShort, "label series is shorter than the shingle width");
  return {labels.begin() + static_cast<long>(width - 1), labels.end()};
}

Matrix minmax_scale(const Matrix& data) {
  Matrix out = data;
  for (std::size_t c = 0; c < data.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < data.rows(); ++i) {
      lo = std::min(lo, data(i, c));
      hi = std::max(hi, data(i, c));
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      out(i, c) = range > 0.0 ? std::clamp((data(i, c) - lo) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

}  // namespace mpf
