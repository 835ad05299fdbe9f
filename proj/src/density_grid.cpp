#include "mpf/density_grid.hpp"

#include <fstream>
#include <iomanip>
#include <limits>

#include "mpf/error.hpp"

namespace mpf {

double DensityGrid::integral() const {
  double sum = 0.0;
  for (double d : density) sum += d;
  return sum * cell_volume;
}

DensityGrid density_grid(const Forest& forest, const BoundingBox& bounds, std::span<const std::size_t> resolution) {
  const std::size_t dims = bounds.dims();
  if (dims == 0 || dims > 2) {
    throw Error(ErrorCode::kUnsupportedDimension, "density grids support 1 or 2 dimensions, got " + std::to_string(dims));
  }
  if (dims != forest.dims()) throw Error(ErrorCode::kUsage, "grid bounds do not match the forest dimensionality");
  if (resolution.size() != 1 && resolution.size() != dims) {
    throw Error(ErrorCode::kUsage, "resolution needs 1 or " + std::to_string(dims) + " values");
  }
  DensityGrid grid;
  grid.bounds = bounds;
  for (std::size_t d = 0; d < dims; ++d) {
    const std::size_t r = resolution.size() == 1 ? resolution[0] : resolution[d];
    if (r == 0) throw Error(ErrorCode::kUsage, "resolution must be positive");
    grid.resolution.push_back(r);
  }
  std::vector<double> step(dims);
  grid.cell_volume = 1.0;
  std::size_t cells = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    step[d] = bounds.side(d) / static_cast<double>(grid.resolution[d]);
    grid.cell_volume *= step[d];
    cells *= grid.resolution[d];
  }
  grid.centres = Matrix(cells, dims);
  grid.density.resize(cells);
  std::vector<double> x(dims);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t d = dims; d-- > 0;) {
      const std::size_t k = rest % grid.resolution[d];
      rest /= grid.resolution[d];
      x[d] = bounds.lower(d) + (static_cast<double>(k) + 0.5) * step[d];
      grid.centres(c, d) = x[d];
    }
    grid.density[c] = forest.density(x);
  }
  return grid;
}

void write_grid_csv(const std::string& path, const DensityGrid& grid) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  write_grid_csv(out, grid);
}

void write_grid_csv(std::ostream& out, const DensityGrid& grid) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t d = 0; d < grid.centres.cols(); ++d) out << 'x' << d << ',';
  out << "density\n";
  for (std::size_t c = 0; c < grid.centres.rows(); ++c) {
    for (std::size_t d = 0; d < grid.centres.cols(); ++d) out << grid.centres(c, d) << ',';
    out << grid.density[c] << '\n';
  }
}

}  // namespace mpf
