#include <cmath>

#include "cspace/error.hpp"
#include "cspace/optimize.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace cspace;
using namespace cspace::testing;

TEST_CASE("clamp and distance to a cuboid") {
  const SpacePtr sp = plane_space();
  const Cuboid b = box(sp, {{"x", {0, 1}}, {"y", {0, 1}}});
  const Weights w = Weights::uniform(sp, {0, 1});
  CHECK(clamp_to_cuboid(Point{2.0, 0.5}, b) == Point{1.0, 0.5});
  CHECK(clamp_to_cuboid(Point{-1.0, 3.0}, b) == Point{0.0, 1.0});
  CHECK(distance_to_cuboid(Point{0.5, 0.5}, b, w) == 0.0);
  CHECK(distance_to_cuboid(Point{3.0, 0.5}, b, w) == 2.0);
  CHECK(distance_to_cuboid(Point{3.0, -1.0}, b, w) == 3.0);

  // Unbounded dimensions contribute nothing.
  CHECK(distance_to_cuboid(Point{0.5, 50.0}, box(sp, {{"x", {0, 1}}}), w) == 0.0);
  CHECK_THROWS_AS(distance_to_cuboid(Point{0, 0}, b, Weights::uniform(sp, {0})), LookupError);
}

TEST_CASE("clamp is the exact nearest point against a lattice") {
  const SpacePtr sp = six_space();
  Random r(4);
  for (int rep = 0; rep < 10; ++rep) {
    const DomainSet ds{0};
    const Weights w = r.weights(sp, ds);
    Point lo(6, -kInf), hi(6, kInf);
    for (std::size_t d : {0u, 1u}) {
      lo[d] = r.uniform(-0.3, 0.0);
      hi[d] = lo[d] + r.uniform(0.05, 0.3);
    }
    const Cuboid b(sp, ds, lo, hi);
    const Point x = r.point(sp, -1, 1);
    const double step = 0.005;
    double best = kInf;
    for (double u = lo[0]; u <= hi[0] + 1e-12; u += step) {
      for (double v = lo[1]; v <= hi[1] + 1e-12; v += step) {
        Point y = x;
        y[0] = u;
        y[1] = v;
        best = std::min(best, combined_distance(x, y, w));
      }
    }
    const double exact = distance_to_cuboid(x, b, w);
    CHECK(exact <= best + 1e-12);
    CHECK(best - exact <= 2 * step);
  }
}

TEST_CASE("alpha-cut bounding box") {
  const SpacePtr sp = make_space({{"d", {"a", "b"}}, {"e", {"z"}}});
  const Weights w(sp, {0, 1}, {1.5, 0.5}, {0.25, 0.75, 1.0});
  const Cuboid b(sp, {0, 1}, Point{0, 0, 0}, Point{1, 1, 1});
  const double alpha = std::exp(-2.0);
  const Cuboid bb = alpha_cut_bbox(b, 1.0, 1.0, w, alpha);
  // r = 2; dimension a moves by 2 / (1.5 * 0.5), b by 2 / (1.5 * sqrt(0.75)), z by 2 / 0.5.
  CHECK(bb.upper(0) == doctest::Approx(1 + 2 / 0.75));
  CHECK(bb.lower(1) == doctest::Approx(-2 / (1.5 * std::sqrt(0.75))));
  CHECK(bb.upper(2) == doctest::Approx(5.0));

  // The bound is tight along each axis.
  Point edge{bb.upper(0), 0.5, 0.5};
  CHECK(std::exp(-distance_to_cuboid(edge, b, w)) == doctest::Approx(alpha));

  CHECK(alpha_cut_bbox(b, 0.8, 1.0, w, 0.8) == b);
  CHECK_THROWS_AS(alpha_cut_bbox(b, 0.5, 1.0, w, 0.6), ValidationError);
}

TEST_CASE("height of intersection, worked examples") {
  const SpacePtr sp = line_space();
  SUBCASE("separated unit intervals with c = 1") {
    const Concept a = uniform_concept({box(sp, {{"x", {0, 1}}})}, 1.0, 1.0);
    const Concept b = uniform_concept({box(sp, {{"x", {3, 4}}})}, 1.0, 1.0);
    const OptimResult r = height_of_intersection(a, b);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(0.36787944117144233).epsilon(1e-6));
    CHECK(r.witness[0] == doctest::Approx(2.0).epsilon(1e-3));
  }
  SUBCASE("unequal decay rates move the witness") {
    // 2(x - 1) = 3 - x balances at x = 5/3, height exp(-4/3).
    const Concept a = uniform_concept({box(sp, {{"x", {0, 1}}})}, 1.0, 2.0);
    const Concept b = uniform_concept({box(sp, {{"x", {3, 4}}})}, 1.0, 1.0);
    const OptimResult r = height_of_intersection(a, b);
    CHECK(r.value == doctest::Approx(std::exp(-4.0 / 3.0)).epsilon(1e-6));
    CHECK(r.witness[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-4));
  }
  SUBCASE("farther apart") {
    const Concept a = uniform_concept({box(sp, {{"x", {0, 1}}})}, 1.0, 1.0);
    const Concept b = uniform_concept({box(sp, {{"x", {5, 6}}})}, 1.0, 1.0);
    CHECK(height_of_intersection(a, b).value ==
          doctest::Approx(0.1353352832366127).epsilon(1e-6));
  }
  SUBCASE("overlapping cores give min(mu0) exactly") {
    const Concept a = uniform_concept({box(sp, {{"x", {0, 2}}})}, 0.9, 1.0);
    const Concept b = uniform_concept({box(sp, {{"x", {1, 3}}})}, 0.6, 4.0);
    const OptimResult r = height_of_intersection(a, b);
    CHECK(r.value == 0.6);
    CHECK(r.converged);
    CHECK(r.witness[0] == doctest::Approx(1.5));
  }
  SUBCASE("smaller peak lifts the balance point") {
    // x - 1 = 3 - x + ln 2, so the balance sits at 2 + ln(2) / 2.
    const Concept a = uniform_concept({box(sp, {{"x", {0, 1}}})}, 1.0, 1.0);
    const Concept b = uniform_concept({box(sp, {{"x", {3, 4}}})}, 0.5, 1.0);
    const GridResult g =
        grid_oracle_max_min(a, b, Box{Point{-1.0}, Point{5.0}}, 1e-5);
    const double expected = std::exp(-(1.0 + std::log(2.0) / 2.0));
    CHECK(g.value == doctest::Approx(expected).epsilon(1e-4));
    CHECK(height_of_intersection(a, b).value == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("height of intersection: invariants") {
  const SpacePtr sp = six_space();
  Random r(17);
  for (int rep = 0; rep < 40; ++rep) {
    const Concept a = r.any_concept(sp);
    const Concept b = r.any_concept(sp);
    const OptimResult h = height_of_intersection(a, b);
    CHECK(h.value > 0.0);
    CHECK(h.value <= std::min(a.mu0(), b.mu0()) + 1e-15);
    // The witness attains the reported height.
    CHECK(std::min(membership(a, h.witness), membership(b, h.witness)) ==
          doctest::Approx(h.value).epsilon(1e-12));
    CHECK(h.converged);
    // Symmetric up to solver tolerance.
    CHECK(height_of_intersection(b, a).value == doctest::Approx(h.value).epsilon(1e-5));
    // No random probe beats it.
    for (int i = 0; i < 200; ++i) {
      const Point x = probe(r, a, b, i);
      CHECK(std::min(membership(a, x), membership(b, x)) <= h.value * (1 + 1e-5));
    }
  }
}

TEST_CASE("height of intersection: lower-dimensional fixtures against a fine lattice") {
  const SpacePtr sp = plane_space();
  Random r(29);
  for (int rep = 0; rep < 6; ++rep) {
    const Concept a = Concept(Core({0, 1}, r.cuboids(sp, {0, 1}, 2, 3.0)), r.uniform(0.5, 1.0),
                              r.uniform(1.0, 3.0), r.weights(sp, {0, 1}));
    const Concept b = Concept(Core({0, 1}, r.cuboids(sp, {0, 1}, 2, 3.0)), r.uniform(0.5, 1.0),
                              r.uniform(1.0, 3.0), r.weights(sp, {0, 1}));
    const GridResult g = grid_oracle_max_min(a, b, oracle_bounds(a, b), 5e-3);
    const double h = height_of_intersection(a, b).value;
    CHECK(h >= g.value - 1e-12);
    CHECK(h - g.value <= 1e-2);
  }
}

TEST_CASE("oracle guards") {
  const SpacePtr sp = line_space();
  const Concept a = uniform_concept({box(sp, {{"x", {0, 1}}})}, 1.0, 1.0);
  CHECK_THROWS_AS(grid_oracle_max_min(a, a, Box{Point{0.0}, Point{1.0}}, 1e-9), NumericError);
  const Box b = oracle_bounds(a, a);
  CHECK(b.lower[0] == doctest::Approx(-3.0));
  CHECK(b.upper[0] == doctest::Approx(4.0));
}

TEST_CASE("height of intersection rejects mixed spaces") {
  const Concept a = uniform_concept({box(line_space(), {{"x", {0, 1}}})}, 1.0, 1.0);
  const Concept b = uniform_concept({box(line_space(), {{"x", {0, 1}}})}, 1.0, 1.0);
  CHECK_NOTHROW(height_of_intersection(a, b));
  const Concept c = uniform_concept({box(plane_space(), {{"x", {0, 1}}})}, 1.0, 1.0);
  CHECK_THROWS_AS(height_of_intersection(a, c), ValidationError);
}

TEST_CASE("height of intersection: degenerate cores, asymmetric decay") {
  const SpacePtr sp = line_space();
  // x = 2 (3 - x) at x = 2, height exp(-2).
  const Concept a = uniform_concept({box(sp, {{"x", {0, 0}}})}, 1.0, 1.0);
  const Concept b = uniform_concept({box(sp, {{"x", {3, 3}}})}, 1.0, 2.0);
  const OptimResult r = height_of_intersection(a, b);
  CHECK(r.value == doctest::Approx(0.1353352832366127).epsilon(1e-6));
  CHECK(r.witness[0] == doctest::Approx(2.0).epsilon(1e-4));
  const GridResult g = grid_oracle_max_min(a, b, oracle_bounds(a, b), 1e-4);
  CHECK(g.value == doctest::Approx(0.1353352832366127).epsilon(1e-3));
}

TEST_CASE("grid oracle on identical concepts") {
  const SpacePtr sp = plane_space();
  const Concept k = three_cuboid_concept(sp);
  const GridResult g = grid_oracle_max_min(k, k, oracle_bounds(k, k), 0.05);
  CHECK(g.value == doctest::Approx(1.0));
  CHECK(height_of_intersection(k, k).value == 1.0);
}

TEST_CASE("alpha-cut bounding box of the unit interval") {
  const SpacePtr sp = line_space();
  const Cuboid b = box(sp, {{"x", {0, 1}}});
  const Cuboid bb = alpha_cut_bbox(b, 1.0, 1.0, Weights::uniform(sp, {0}), std::exp(-1.0));
  CHECK(bb.lower(0) == doctest::Approx(-1.0));
  CHECK(bb.upper(0) == doctest::Approx(2.0));
}
