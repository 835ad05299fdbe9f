#include "mpf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mpf/error.hpp"

namespace mpf {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kInvalidData, "matrix buffer size does not match shape");
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

PointId Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kInvalidPoint, "row has " + std::to_string(values.size()) + " values, expected " +
                                              std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  return static_cast<PointId>(rows_++);
}

void Matrix::require_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::kInvalidData, "non-finite value at row " + std::to_string(i / cols_) + ", column " +
                                               std::to_string(i % cols_));
    }
  }
}

BoundingBox::BoundingBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw Error(ErrorCode::kInvalidData, "box bounds have different dimensionality");
  }
  for (std::size_t d = 0; d < lower_.size(); ++d) {
    if (!(lower_[d] <= upper_[d])) {
      throw Error(ErrorCode::kInvalidInterval, "box lower bound exceeds upper bound in dimension " + std::to_string(d));
    }
  }
}

BoundingBox BoundingBox::of_point(std::span<const double> x) {
  BoundingBox box;
  box.lower_.assign(x.begin(), x.end());
  box.upper_.assign(x.begin(), x.end());
  return box;
}

BoundingBox BoundingBox::unit(std::size_t dims) {
  return BoundingBox(std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0));
}

double BoundingBox::volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < dims(); ++d) v *= side(d);
  return v;
}

double BoundingBox::log_volume() const {
  double lv = 0.0;
  for (std::size_t d = 0; d < dims(); ++d) {
    const double s = side(d);
    if (s <= 0.0) return -std::numeric_limits<double>::infinity();
    lv += std::log(s);
  }
  return lv;
}

double BoundingBox::linear_dimension() const {
  double total = 0.0;
  for (std::size_t d = 0; d < dims(); ++d) total += side(d);
  return total;
}

bool BoundingBox::all_sides_positive() const {
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!(side(d) > 0.0)) return false;
  }
  return true;
}

std::vector<double> BoundingBox::sides() const {
  std::vector<double> out(dims());
  for (std::size_t d = 0; d < dims(); ++d) out[d] = side(d);
  return out;
}

bool BoundingBox::contains(std::span<const double> x) const {
  for (std::size_t d = 0; d < dims(); ++d) {
    if (x[d] < lower_[d] || x[d] > upper_[d]) return false;
  }
  return true;
}

bool BoundingBox::contains(const BoundingBox& other) const {
  for (std::size_t d = 0; d < dims(); ++d) {
    if (other.lower_[d] < lower_[d] || other.upper_[d] > upper_[d]) return false;
  }
  return true;
}

void BoundingBox::extend(std::span<const double> x) {
  for (std::size_t d = 0; d < dims(); ++d) {
    lower_[d] = std::min(lower_[d], x[d]);
    upper_[d] = std::max(upper_[d], x[d]);
  }
}

void BoundingBox::extend(const BoundingBox& other) {
  for (std::size_t d = 0; d < dims(); ++d) {
    lower_[d] = std::min(lower_[d], other.lower_[d]);
    upper_[d] = std::max(upper_[d], other.upper_[d]);
  }
}

BoundingBox BoundingBox::extended(std::span<const double> x) const {
  BoundingBox out = *this;
  out.extend(x);
  return out;
}

std::vector<double> BoundingBox::extension(std::span<const double> x) const {
  std::vector<double> e(dims());
  for (std::size_t d = 0; d < dims(); ++d) {
    e[d] = std::max(lower_[d] - x[d], 0.0) + std::max(x[d] - upper_[d], 0.0);
  }
  return e;
}

BoundingBox BoundingBox::lower_part(std::size_t dim, double location) const {
  BoundingBox out = *this;
  out.upper_[dim] = std::clamp(location, lower_[dim], upper_[dim]);
  return out;
}

BoundingBox BoundingBox::upper_part(std::size_t dim, double location) const {
  BoundingBox out = *this;
  out.lower_[dim] = std::clamp(location, lower_[dim], upper_[dim]);
  return out;
}

BoundingBox bbox_of(const Matrix& points) {
  if (points.empty()) throw Error(ErrorCode::kEmptyInput, "bounding box of an empty point set");
  BoundingBox box = BoundingBox::of_point(points.row(0));
  for (std::size_t i = 1; i < points.rows(); ++i) box.extend(points.row(i));
  return box;
}

BoundingBox bbox_of(const Matrix& points, std::span<const PointId> ids) {
  if (ids.empty()) throw Error(ErrorCode::kEmptyInput, "bounding box of an empty point set");
  BoundingBox box = BoundingBox::of_point(points.row(ids[0]));
  for (std::size_t i = 1; i < ids.size(); ++i) box.extend(points.row(ids[i]));
  return box;
}

double log_diff_exp(double a, double b) {
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (b >= a) return -std::numeric_limits<double>::infinity();
  return a + std::log(-std::expm1(b - a));
}

}  // namespace mpf
