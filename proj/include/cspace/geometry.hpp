#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "cspace/space.hpp"

namespace cspace {

/// Axis-parallel box. Bounds are finite on every dimension of its domain set and
/// (-inf, +inf) everywhere else. Degenerate extents (lower == upper) are allowed.
class Cuboid {
 public:
  Cuboid(SpacePtr space, DomainSet domains, Point lower, Point upper);

  /// Infers the domain set from which domains carry finite bounds. A domain that is
  /// bounded on some but not all of its dimensions is rejected.
  static Cuboid from_bounds(SpacePtr space, Point lower, Point upper);
  /// Degenerate box holding a single point on the given domains.
  static Cuboid point(SpacePtr space, DomainSet domains, Coords at);

  const SpacePtr& space() const { return space_; }
  const DomainSet& domains() const { return domains_; }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  double lower(std::size_t dim) const { return lower_[dim]; }
  double upper(std::size_t dim) const { return upper_[dim]; }
  bool bounded(std::size_t dim) const { return std::isfinite(lower_[dim]); }

  /// Midpoint of the bounds; unbounded dimensions get `fallback`.
  Point center(double fallback = 0.0) const;

  bool operator==(const Cuboid& other) const {
    return domains_ == other.domains_ && lower_ == other.lower_ && upper_ == other.upper_;
  }

 private:
  SpacePtr space_;
  DomainSet domains_;
  Point lower_;
  Point upper_;
};

bool cuboid_contains(const Cuboid& box, Coords x);

/// Coordinate-wise max of lower / min of upper bounds; nullopt when empty.
std::optional<Cuboid> cuboid_intersect(const Cuboid& a, const Cuboid& b);

/// Keeps the bounds of `domains` and releases the rest. Throws ValidationError
/// unless domains is a subset of the cuboid's domain set.
Cuboid cuboid_project(const Cuboid& box, const DomainSet& domains);

/// Intersection of all cuboids; nullopt when empty. Requires at least one cuboid.
std::optional<Cuboid> central_region(std::span<const Cuboid> cuboids);

/// Extends every cuboid to contain p*, the mean of the cuboid centers. Per dimension
/// the mean runs over the cuboids that bound it; dimensions nobody bounds are left alone.
std::vector<Cuboid> repair(std::span<const Cuboid> cuboids);

/// Union of cuboids with a non-empty central region: a simple star-shaped set.
///
/// Every cuboid's domain set must lie within the core's domain set. Cuboids are
/// allowed to cover only part of it, which happens after unions across different
/// domain sets and after projections.
class Core {
 public:
  Core(DomainSet domains, std::vector<Cuboid> cuboids);
  /// Domain set is the union of the cuboids' domain sets.
  explicit Core(std::vector<Cuboid> cuboids);

  const SpacePtr& space() const { return cuboids_.front().space(); }
  const DomainSet& domains() const { return domains_; }
  const std::vector<Cuboid>& cuboids() const { return cuboids_; }
  const Cuboid& central_region() const { return central_; }

  bool contains(Coords x) const;

  bool operator==(const Core& other) const {
    return domains_ == other.domains_ && cuboids_ == other.cuboids_;
  }

 private:
  DomainSet domains_;
  std::vector<Cuboid> cuboids_;
  Cuboid central_;
};

/// Pairwise cuboid intersections, repaired when their central region is empty. If no
/// pair intersects, the closest pair of points between the cores (per-dimension
/// clamping, unit weights) seeds two degenerate cuboids that repair then bridges.
Core core_intersect(const Core& a, const Core& b);

/// Concatenated cuboids, repaired when the central region is empty.
Core core_union(const Core& a, const Core& b);

/// Projects every cuboid onto `domains`. Throws ValidationError when domains is
/// empty or not a subset of the core's domain set.
Core core_project(const Core& core, const DomainSet& domains);

}  // namespace cspace
