#pragma once

#include <string>

#include "mpf/mondrian.hpp"

namespace mpf {

enum class RegionKind { kOutside, kObserved, kComplement };

// Terminal region reached by a query point.
struct LeafQuery {
  double mass = 0.0;
  double density = 0.0;
  NodeId node = kNoNode;
  RegionKind kind = RegionKind::kOutside;

  bool in_domain() const noexcept { return kind != RegionKind::kOutside; }
};

// One cell of the partition a tree induces over its domain.
struct LeafRegion {
  std::string encoding;
  NodeId node = kNoNode;
  RegionKind kind = RegionKind::kObserved;
  double mass = 0.0;
  double log_volume = 0.0;
  double density = 0.0;
};

// mass / exp(log_volume); +inf for a zero-volume cell with mass, 0 when both vanish.
double density_of(double mass, double log_volume);

}  // namespace mpf
