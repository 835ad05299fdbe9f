#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mpf/forest.hpp"

namespace mpf {

// Forest density at the centres of a regular grid over `bounds`.
struct DensityGrid {
  BoundingBox bounds;
  std::vector<std::size_t> resolution;
  // One row per cell centre, row-major with the last axis fastest.
  Matrix centres;
  std::vector<double> density;
  double cell_volume = 0.0;

  // Midpoint-rule integral of the density over `bounds`.
  double integral() const;
};

// `resolution` holds one count per axis, or a single count for every axis.
// Throws unsupported-dimension for D > 2.
DensityGrid density_grid(const Forest& forest, const BoundingBox& bounds, std::span<const std::size_t> resolution);

// Columns x0[,x1],density.
void write_grid_csv(const std::string& path, const DensityGrid& grid);
void write_grid_csv(std::ostream& out, const DensityGrid& grid);

}  // namespace mpf
