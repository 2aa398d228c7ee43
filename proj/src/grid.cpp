#include "cspace/grid.hpp"

#include <cmath>
#include <cstdio>

#include "cspace/error.hpp"

namespace cspace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

GridExport export_grid(const Concept& k, std::array<std::size_t, 2> dims,
                       std::array<double, 2> lower, std::array<double, 2> upper,
                       std::array<double, 2> step, Coords slice, std::size_t max_cells) {
  const SpaceSpec& sp = *k.space();
  check_point(sp, slice);
  if (dims[0] == dims[1]) throw ValidationError("grid dimensions must differ");

  GridExport grid;
  for (std::size_t i = 0; i < 2; ++i) {
    if (dims[i] >= sp.dimension_count()) throw LookupError("grid dimension out of range");
    if (!(step[i] > 0.0) || !std::isfinite(step[i])) {
      throw ValidationError("grid step must be positive");
    }
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i]) {
      throw ValidationError("grid range must be finite with lower <= upper");
    }
    const double count = std::floor((upper[i] - lower[i]) / step[i] + 1e-9) + 1.0;
    if (count > static_cast<double>(max_cells)) {
      throw NumericError("grid exceeds the cap of " + std::to_string(max_cells) + " cells");
    }
    grid.dims[i] = sp.dimension_name(dims[i]);
    grid.counts[i] = static_cast<std::size_t>(count);
  }
  if (static_cast<double>(grid.counts[0]) * static_cast<double>(grid.counts[1]) >
      static_cast<double>(max_cells)) {
    throw NumericError("grid exceeds the cap of " + std::to_string(max_cells) + " cells");
  }
  grid.lower = lower;
  grid.upper = upper;
  grid.step = step;

  grid.rows.reserve(grid.counts[0] * grid.counts[1]);
  Point x(slice.begin(), slice.end());
  for (std::size_t i = 0; i < grid.counts[0]; ++i) {
    x[dims[0]] = lower[0] + static_cast<double>(i) * step[0];
    for (std::size_t j = 0; j < grid.counts[1]; ++j) {
      x[dims[1]] = lower[1] + static_cast<double>(j) * step[1];
      grid.rows.push_back({x[dims[0]], x[dims[1]], membership(k, x)});
    }
  }
  return grid;
}

std::string to_csv(const GridExport& grid) {
  std::string out = grid.dims[0] + "," + grid.dims[1] + ",membership\n";
  for (const auto& row : grid.rows) {
    out += format_number(row[0]);
    out += ',';
    out += format_number(row[1]);
    out += ',';
    out += format_number(row[2]);
    out += '\n';
  }
  return out;
}

}  // namespace cspace
