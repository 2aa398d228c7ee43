#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "cspace/concept.hpp"

namespace cspace {

/// Membership sampled on a 2-D lattice through a slice of the space.
struct GridExport {
  std::array<std::string, 2> dims;
  std::array<double, 2> lower{};
  std::array<double, 2> upper{};
  std::array<double, 2> step{};
  std::array<std::size_t, 2> counts{};
  /// (coord1, coord2, membership), row-major: the second dimension varies fastest.
  std::vector<std::array<double, 3>> rows;
};

/// Evaluates membership at lower + i * step (inclusive of upper when it falls on the
/// lattice) along two dimensions; every other coordinate comes from `slice`.
/// Throws NumericError when counts[0] * counts[1] exceeds max_cells.
GridExport export_grid(const Concept& k, std::array<std::size_t, 2> dims,
                       std::array<double, 2> lower, std::array<double, 2> upper,
                       std::array<double, 2> step, Coords slice,
                       std::size_t max_cells = 10'000'000);

/// Header `<dim1>,<dim2>,membership`, values with 9 significant digits.
std::string to_csv(const GridExport& grid);

/// printf("%.9g") of a value.
std::string format_number(double v);

}  // namespace cspace
