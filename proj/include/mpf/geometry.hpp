#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mpf {

using PointId = std::uint32_t;

// Row-major dense matrix. Rows are appended, never removed, so a row index is
// a stable identifier for the observation stored there.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  // Appends a row; the first append on an empty 0-column matrix fixes cols().
  PointId append_row(std::span<const double> values);

  const std::vector<double>& data() const noexcept { return data_; }

  // Throws invalid-data when any entry is NaN or infinite.
  void require_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class BoundingBox {
 public:
  BoundingBox() = default;
  BoundingBox(std::vector<double> lower, std::vector<double> upper);

  // Degenerate box at a single point.
  static BoundingBox of_point(std::span<const double> x);
  static BoundingBox unit(std::size_t dims);

  std::size_t dims() const noexcept { return lower_.size(); }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }
  double lower(std::size_t d) const { return lower_[d]; }
  double upper(std::size_t d) const { return upper_[d]; }
  double side(std::size_t d) const { return upper_[d] - lower_[d]; }

  double volume() const;
  // Sum of log side lengths; -inf when any side is zero.
  double log_volume() const;
  double linear_dimension() const;
  bool all_sides_positive() const;
  std::vector<double> sides() const;

  bool contains(std::span<const double> x) const;
  bool contains(const BoundingBox& other) const;

  void extend(std::span<const double> x);
  void extend(const BoundingBox& other);
  BoundingBox extended(std::span<const double> x) const;

  // Per-dimension distance from x to the box: max(l - x, 0) + max(x - u, 0).
  std::vector<double> extension(std::span<const double> x) const;

  // Halves of the box on either side of `location` in `dim`.
  BoundingBox lower_part(std::size_t dim, double location) const;
  BoundingBox upper_part(std::size_t dim, double location) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

BoundingBox bbox_of(const Matrix& points);
BoundingBox bbox_of(const Matrix& points, std::span<const PointId> ids);

// log(exp(a) - exp(b)) for a >= b.
double log_diff_exp(double a, double b);

}  // namespace mpf
