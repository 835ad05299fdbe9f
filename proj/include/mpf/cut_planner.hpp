#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>

#include "mpf/geometry.hpp"
#include "mpf/random.hpp"

namespace mpf {

// A proposed axis-aligned cut. `time` is the absolute node time, not the
// waiting time since the parent.
struct Cut {
  std::size_t dim = 0;
  double location = 0.0;
  double time = 0.0;
};

// Asks whether a node whose box is `box` splits before `lifetime`.
struct SplitRequest {
  const BoundingBox& box;
  double parent_time;
  double lifetime;
  std::size_t depth;
};

// Asks whether a cut in the gap between `box` and `point` occurs before the
// existing node time, i.e. whether a new parent is spliced above the node.
struct ExtendRequest {
  const BoundingBox& box;
  std::span<const double> point;
  double parent_time;
  double node_time;
  std::size_t depth;
};

// Source of every random cut the samplers make. Tests swap in scripted
// planners to reproduce exact trees.
class CutPlanner {
 public:
  virtual ~CutPlanner() = default;
  virtual std::optional<Cut> split(const SplitRequest& request) = 0;
  virtual std::optional<Cut> extend(const ExtendRequest& request) = 0;
};

// Mondrian draws: exponential waiting time with rate equal to the linear
// dimension (or total extension), dimension proportional to length, location
// uniform on the chosen interval.
class RandomCutPlanner final : public CutPlanner {
 public:
  explicit RandomCutPlanner(Rng& rng) : rng_(rng) {}

  std::optional<Cut> split(const SplitRequest& request) override;
  std::optional<Cut> extend(const ExtendRequest& request) override;

 private:
  Rng& rng_;
};

// Replays a fixed sequence of decisions in the order the sampler asks for
// them. A disengaged entry means "no cut". When the script runs out, requests
// go to `fallback` if one is set and otherwise yield no cut.
class ScriptedCutPlanner final : public CutPlanner {
 public:
  explicit ScriptedCutPlanner(std::deque<std::optional<Cut>> script, CutPlanner* fallback = nullptr)
      : script_(std::move(script)), fallback_(fallback) {}

  std::optional<Cut> split(const SplitRequest& request) override;
  std::optional<Cut> extend(const ExtendRequest& request) override;

  std::size_t remaining() const noexcept { return script_.size(); }

 private:
  std::deque<std::optional<Cut>> script_;
  CutPlanner* fallback_;
};

// Throws invalid-script unless `cut` lies inside the box extent, after the
// parent time and strictly before `time_limit`.
void validate_split(const Cut& cut, const SplitRequest& request);
// Throws invalid-script unless `cut` strictly separates the point from the box.
void validate_extension(const Cut& cut, const ExtendRequest& request);

}  // namespace mpf
