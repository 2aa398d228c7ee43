#include <cmath>

#include "cspace/error.hpp"
#include "cspace/grid.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace cspace;
using namespace cspace::testing;

namespace {

double max_jump(const GridExport& g) {
  double jump = 0.0;
  const std::size_t n1 = g.counts[1];
  for (std::size_t i = 0; i + 1 < g.rows.size(); ++i) {
    if ((i + 1) % n1 != 0) jump = std::max(jump, std::abs(g.rows[i + 1][2] - g.rows[i][2]));
    if (i + n1 < g.rows.size()) jump = std::max(jump, std::abs(g.rows[i + n1][2] - g.rows[i][2]));
  }
  return jump;
}

}  // namespace

TEST_CASE("grid layout") {
  const SpacePtr sp = plane_space();
  const Concept k = three_cuboid_concept(sp);
  const GridExport g = export_grid(k, {0, 1}, {0, 0}, {1, 1}, {0.25, 0.5}, Point{0, 0});
  CHECK(g.counts[0] == 5);
  CHECK(g.counts[1] == 3);
  REQUIRE(g.rows.size() == 15);
  CHECK(g.rows[1][0] == 0.0);
  CHECK(g.rows[1][1] == 0.5);
  CHECK(g.rows[3][0] == 0.25);
  for (const auto& row : g.rows) CHECK((row[2] >= 0.0 && row[2] <= 1.0));
  CHECK(to_csv(g).rfind("x,y,membership\n0,0,", 0) == 0);
  CHECK(format_number(std::exp(-1.0)) == "0.367879441");

  CHECK_THROWS_AS(export_grid(k, {0, 1}, {0, 0}, {1, 1}, {1e-5, 1e-5}, Point{0, 0}), NumericError);
  CHECK_THROWS_AS(export_grid(k, {0, 1}, {0, 0}, {1, 1}, {0.0, 0.1}, Point{0, 0}), ValidationError);
}

TEST_CASE("slice through the core interior") {
  const SpacePtr sp = six_space();
  const Concept k = uniform_concept(
      {box(sp, {{"hue", {0, 1}}, {"saturation", {0, 1}}, {"roundness", {0, 1}}, {"elongation", {0, 1}}})},
      0.7, 2.0);
  const Point slice = at(sp, {{"roundness", 0.5}, {"elongation", 0.5}});
  const GridExport g = export_grid(k, {0, 1}, {0.1, 0.1}, {0.9, 0.9}, {0.1, 0.1}, slice);
  for (const auto& row : g.rows) CHECK(row[2] == 0.7);
}

TEST_CASE("symmetric concept gives a symmetric grid") {
  const SpacePtr sp = plane_space();
  const Concept k = uniform_concept({box(sp, {{"x", {-0.5, 0.5}}, {"y", {-0.25, 0.25}}})}, 1.0, 3.0);
  const GridExport g = export_grid(k, {0, 1}, {-2, -2}, {2, 2}, {0.125, 0.125}, Point{0, 0});
  const std::size_t n = g.counts[0];
  REQUIRE(n == g.counts[1]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = g.rows[i * n + j][2];
      CHECK(v == doctest::Approx(g.rows[(n - 1 - i) * n + j][2]).epsilon(1e-12));
      CHECK(v == doctest::Approx(g.rows[i * n + (n - 1 - j)][2]).epsilon(1e-12));
    }
  }
}

TEST_CASE("halving the step halves the largest jump between neighbours") {
  const SpacePtr sp = plane_space();
  const Concept k = three_cuboid_concept(sp);
  const double coarse = max_jump(export_grid(k, {0, 1}, {-1, -1}, {2, 2}, {0.02, 0.02}, Point{0, 0}));
  const double fine = max_jump(export_grid(k, {0, 1}, {-1, -1}, {2, 2}, {0.01, 0.01}, Point{0, 0}));
  CHECK(fine == doctest::Approx(coarse / 2).epsilon(0.05));
  CHECK(coarse <= k.mu0() * k.c() * 0.02 + 1e-12);
}
