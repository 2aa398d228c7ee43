#pragma once

#include <cstddef>

#include "cspace/geometry.hpp"
#include "cspace/space.hpp"

namespace cspace {

class Concept;

struct SolverOptions {
  /// Certified optimality gap on -ln(alpha'), i.e. a relative tolerance on alpha'.
  double tolerance = 1e-6;
  /// Cap per cuboid pair.
  std::size_t max_iterations = 10000;
  /// Intersections whose height falls below this are rejected as unrelated concepts.
  double alpha_floor = 1e-12;
};

struct OptimResult {
  double value = 0.0;
  Point witness;
  std::size_t iterations = 0;
  bool converged = false;
  /// Upper bound on the distance between -ln(value) and the true optimum.
  double gap = 0.0;
};

/// Nearest point of the box: every coordinate clamped into [lower, upper].
Point clamp_to_cuboid(Coords x, const Cuboid& box);

/// Exact minimum of the combined distance from x to any point of the box. The
/// weights must cover every domain the box bounds.
double distance_to_cuboid(Coords x, const Cuboid& box, const Weights& weights);

/// Tight bounding box of {x : mu0 * exp(-c * d(x, box)) >= alpha}. Each finite bound
/// moves out by r / (w_domain * sqrt(w_dim)) with r = ln(mu0 / alpha) / c.
Cuboid alpha_cut_bbox(const Cuboid& box, double mu0, double c, const Weights& weights,
                      double alpha);

/// Height of intersection: the largest alpha at which the alpha-cuts of both concepts
/// meet, max_x min(mu_a(x), mu_b(x)).
///
/// When the cores share a point the answer is min(mu0_a, mu0_b) with no numerics.
/// Otherwise every cuboid pair (C_i, C_j) yields the convex problem
///
///   min_x max(c_a d(x, C_i) - ln mu0_a,  c_b d(x, C_j) - ln mu0_b)
///
/// which is solved by a central-cut ellipsoid method over the box between the two
/// cuboids, started from the midpoint of their closest points. The witness attains
/// min(mu_a, mu_b) == value exactly; `converged` certifies gap <= tolerance.
OptimResult height_of_intersection(const Concept& a, const Concept& b,
                                   const SolverOptions& options = {});

/// Axis-aligned search region; lower == upper pins a dimension.
struct Box {
  Point lower;
  Point upper;
};

struct GridResult {
  double value = 0.0;
  Point witness;
  std::size_t evaluated = 0;
};

/// Joint bounding box of both cores, expanded by 3 * max(1/c) on every bounded
/// dimension. Dimensions neither concept uses are pinned to 0.
Box oracle_bounds(const Concept& a, const Concept& b);

/// Exhaustive lattice maximization of min(mu_a, mu_b). Throws NumericError when the
/// lattice would exceed max_points.
GridResult grid_oracle_max_min(const Concept& a, const Concept& b, const Box& bounds, double step,
                               std::size_t max_points = 50'000'000);

/// Coarse exhaustive lattice, then repeated exhaustive lattices around the best
/// separated candidates until the spacing reaches final_step. For dimensions where a
/// single fine lattice is unaffordable.
GridResult refined_grid_oracle_max_min(const Concept& a, const Concept& b, const Box& bounds,
                                       double final_step, std::size_t points_per_dim = 21,
                                       std::size_t keep = 8);

}  // namespace cspace
