#include "mpf/cut_planner.hpp"

#include <numeric>
#include <string>

#include "mpf/error.hpp"

namespace mpf {

std::optional<Cut> RandomCutPlanner::split(const SplitRequest& request) {
  const double linear = request.box.linear_dimension();
  if (!(linear > 0.0)) return std::nullopt;
  const double wait = rng_.exponential(linear);
  if (!(request.parent_time + wait < request.lifetime)) return std::nullopt;

  const std::vector<double> sides = request.box.sides();
  const std::size_t dim = rng_.categorical(sides);
  const double lo = request.box.lower(dim);
  const double hi = request.box.upper(dim);
  double location = rng_.uniform(lo, hi);
  // A cut exactly at the upper bound would leave the right side empty.
  while (location >= hi) location = rng_.uniform(lo, hi);
  return Cut{dim, location, request.parent_time + wait};
}

std::optional<Cut> RandomCutPlanner::extend(const ExtendRequest& request) {
  const std::vector<double> gaps = request.box.extension(request.point);
  const double rate = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  if (!(rate > 0.0)) return std::nullopt;
  const double wait = rng_.exponential(rate);
  if (!(request.parent_time + wait < request.node_time)) return std::nullopt;

  const std::size_t dim = rng_.categorical(gaps);
  const double z = request.point[dim];
  double location;
  if (z > request.box.upper(dim)) {
    // Cut in [u, z); z itself would route to the box's side.
    do {
      location = rng_.uniform(request.box.upper(dim), z);
    } while (location >= z);
  } else {
    // Cut in [z, l); l would send the box's minimum to the point's side.
    do {
      location = rng_.uniform(z, request.box.lower(dim));
    } while (location >= request.box.lower(dim));
  }
  return Cut{dim, location, request.parent_time + wait};
}

std::optional<Cut> ScriptedCutPlanner::split(const SplitRequest& request) {
  if (script_.empty()) return fallback_ ? fallback_->split(request) : std::nullopt;
  std::optional<Cut> next = script_.front();
  script_.pop_front();
  return next;
}

std::optional<Cut> ScriptedCutPlanner::extend(const ExtendRequest& request) {
  if (script_.empty()) return fallback_ ? fallback_->extend(request) : std::nullopt;
  std::optional<Cut> next = script_.front();
  script_.pop_front();
  return next;
}

void validate_split(const Cut& cut, const SplitRequest& request) {
  if (cut.dim >= request.box.dims()) {
    throw Error(ErrorCode::kInvalidScript, "cut dimension " + std::to_string(cut.dim) + " out of range");
  }
  if (!(cut.location >= request.box.lower(cut.dim) && cut.location < request.box.upper(cut.dim))) {
    throw Error(ErrorCode::kInvalidScript, "cut location " + std::to_string(cut.location) +
                                               " outside the node extent in dimension " + std::to_string(cut.dim));
  }
  if (!(cut.time > request.parent_time && cut.time < request.lifetime)) {
    throw Error(ErrorCode::kInvalidScript, "cut time " + std::to_string(cut.time) + " outside (parent time, lifetime)");
  }
}

void validate_extension(const Cut& cut, const ExtendRequest& request) {
  if (cut.dim >= request.box.dims()) {
    throw Error(ErrorCode::kInvalidScript, "cut dimension " + std::to_string(cut.dim) + " out of range");
  }
  const double z = request.point[cut.dim];
  const double lo = request.box.lower(cut.dim);
  const double hi = request.box.upper(cut.dim);
  const bool above = z > hi && cut.location >= hi && cut.location < z;
  const bool below = z < lo && cut.location >= z && cut.location < lo;
  if (!above && !below) {
    throw Error(ErrorCode::kInvalidScript, "extension cut does not separate the new point from the node box");
  }
  if (!(cut.time > request.parent_time && cut.time < request.node_time)) {
    throw Error(ErrorCode::kInvalidScript, "extension cut time outside (parent time, node time)");
  }
}

}  // namespace mpf
