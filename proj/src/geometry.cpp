#include "cspace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cspace/error.hpp"

namespace cspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool encloses(const Cuboid& outer, const Cuboid& inner) {
  for (std::size_t d = 0; d < outer.lower().size(); ++d) {
    if (outer.lower(d) > inner.lower(d) || outer.upper(d) < inner.upper(d)) return false;
  }
  return true;
}

// Removes cuboids that another member already covers. The union is unchanged; among
// identical cuboids the first one stays.
void drop_redundant(std::vector<Cuboid>& cuboids) {
  std::vector<bool> covered(cuboids.size(), false);
  for (std::size_t i = 0; i < cuboids.size(); ++i) {
    for (std::size_t j = 0; j < cuboids.size() && !covered[i]; ++j) {
      if (i == j || !encloses(cuboids[j], cuboids[i])) continue;
      covered[i] = !(cuboids[i] == cuboids[j]) || j < i;
    }
  }
  std::vector<Cuboid> kept;
  kept.reserve(cuboids.size());
  for (std::size_t i = 0; i < cuboids.size(); ++i) {
    if (!covered[i]) kept.push_back(std::move(cuboids[i]));
  }
  cuboids = std::move(kept);
}

}  // namespace

Cuboid::Cuboid(SpacePtr space, DomainSet domains, Point lower, Point upper)
    : space_(std::move(space)),
      domains_(std::move(domains)),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  if (!space_) throw ValidationError("cuboid needs a space");
  const SpaceSpec& sp = *space_;
  if (lower_.size() != sp.dimension_count() || upper_.size() != sp.dimension_count()) {
    throw ValidationError("cuboid bounds must have one entry per dimension");
  }
  if (!std::is_sorted(domains_.begin(), domains_.end()) ||
      std::adjacent_find(domains_.begin(), domains_.end()) != domains_.end()) {
    throw ValidationError("cuboid domain set must be sorted and duplicate-free");
  }
  if (!domains_.empty() && domains_.back() >= sp.domain_count()) {
    throw LookupError("cuboid domain id out of range");
  }
  for (std::size_t d = 0; d < sp.dimension_count(); ++d) {
    const std::string& name = sp.dimension_name(d);
    if (domain_contains(domains_, sp.domain_of_dimension(d))) {
      if (!std::isfinite(lower_[d]) || !std::isfinite(upper_[d])) {
        throw ValidationError("cuboid bound on dimension '" + name + "' must be finite");
      }
      if (lower_[d] > upper_[d]) {
        throw ValidationError("cuboid lower bound exceeds upper bound on dimension '" + name +
                              "'");
      }
    } else if (lower_[d] != -kInf || upper_[d] != kInf) {
      throw ValidationError("dimension '" + name +
                            "' lies outside the cuboid's domains and must be unbounded");
    }
  }
}

Cuboid Cuboid::from_bounds(SpacePtr space, Point lower, Point upper) {
  if (!space) throw ValidationError("cuboid needs a space");
  if (lower.size() != space->dimension_count() || upper.size() != space->dimension_count()) {
    throw ValidationError("cuboid bounds must have one entry per dimension");
  }
  DomainSet domains;
  for (DomainId id = 0; id < space->domain_count(); ++id) {
    std::size_t finite = 0;
    const auto dims = space->dimensions_of(id);
    for (std::size_t d : dims) {
      if (std::isfinite(lower[d]) || std::isfinite(upper[d])) ++finite;
    }
    if (finite == dims.size()) {
      domains.push_back(id);
    } else if (finite != 0) {
      throw ValidationError("domain '" + space->domain(id).name +
                            "' is only partially bounded");
    }
  }
  return Cuboid(std::move(space), std::move(domains), std::move(lower), std::move(upper));
}

Cuboid Cuboid::point(SpacePtr space, DomainSet domains, Coords at) {
  if (!space) throw ValidationError("cuboid needs a space");
  Point lower(space->dimension_count(), -kInf);
  Point upper(space->dimension_count(), kInf);
  for (std::size_t d : space->dimensions_of(domains)) {
    lower[d] = at[d];
    upper[d] = at[d];
  }
  return Cuboid(std::move(space), std::move(domains), std::move(lower), std::move(upper));
}

Point Cuboid::center(double fallback) const {
  Point c(lower_.size(), fallback);
  for (std::size_t d = 0; d < lower_.size(); ++d) {
    if (bounded(d)) c[d] = 0.5 * (lower_[d] + upper_[d]);
  }
  return c;
}

bool cuboid_contains(const Cuboid& box, Coords x) {
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (x[d] < box.lower(d) || x[d] > box.upper(d)) return false;
  }
  return true;
}

std::optional<Cuboid> cuboid_intersect(const Cuboid& a, const Cuboid& b) {
  if (!same_space(a.space(), b.space())) {
    throw ValidationError("cannot intersect cuboids from different spaces");
  }
  const std::size_t n = a.lower().size();
  Point lower(n), upper(n);
  for (std::size_t d = 0; d < n; ++d) {
    lower[d] = std::max(a.lower(d), b.lower(d));
    upper[d] = std::min(a.upper(d), b.upper(d));
    if (lower[d] > upper[d]) return std::nullopt;
  }
  return Cuboid(a.space(), domain_union(a.domains(), b.domains()), std::move(lower),
                std::move(upper));
}

Cuboid cuboid_project(const Cuboid& box, const DomainSet& domains) {
  if (!domain_subset(domains, box.domains())) {
    throw ValidationError("projection domains must be a subset of the cuboid's domains");
  }
  const SpaceSpec& sp = *box.space();
  Point lower(sp.dimension_count(), -kInf);
  Point upper(sp.dimension_count(), kInf);
  for (std::size_t d : sp.dimensions_of(domains)) {
    lower[d] = box.lower(d);
    upper[d] = box.upper(d);
  }
  return Cuboid(box.space(), domains, std::move(lower), std::move(upper));
}

std::optional<Cuboid> central_region(std::span<const Cuboid> cuboids) {
  if (cuboids.empty()) throw ValidationError("central region of an empty cuboid list");
  std::optional<Cuboid> acc = cuboids.front();
  for (std::size_t i = 1; i < cuboids.size() && acc; ++i) {
    acc = cuboid_intersect(*acc, cuboids[i]);
  }
  return acc;
}

std::vector<Cuboid> repair(std::span<const Cuboid> cuboids) {
  if (cuboids.empty()) return {};
  const std::size_t n = cuboids.front().lower().size();

  Point anchor(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (const Cuboid& c : cuboids) {
    for (std::size_t d = 0; d < n; ++d) {
      if (c.bounded(d)) {
        anchor[d] += 0.5 * (c.lower(d) + c.upper(d));
        ++count[d];
      }
    }
  }

  std::vector<Cuboid> out;
  out.reserve(cuboids.size());
  for (const Cuboid& c : cuboids) {
    Point lower = c.lower();
    Point upper = c.upper();
    for (std::size_t d = 0; d < n; ++d) {
      if (count[d] == 0) continue;
      const double p = anchor[d] / static_cast<double>(count[d]);
      lower[d] = std::min(lower[d], p);
      upper[d] = std::max(upper[d], p);
    }
    out.emplace_back(c.space(), c.domains(), std::move(lower), std::move(upper));
  }
  return out;
}

namespace {

Cuboid checked_central(const DomainSet& domains, const std::vector<Cuboid>& cuboids) {
  if (cuboids.empty()) throw ValidationError("a core needs at least one cuboid");
  if (domains.empty()) throw ValidationError("a core needs at least one domain");
  const SpacePtr& space = cuboids.front().space();
  for (const Cuboid& c : cuboids) {
    if (!same_space(space, c.space())) {
      throw ValidationError("core cuboids must share one space");
    }
    if (!domain_subset(c.domains(), domains)) {
      throw ValidationError("cuboid domains must lie within the core's domains");
    }
  }
  auto p = central_region(cuboids);
  if (!p) throw ValidationError("cuboids of a core must have a non-empty intersection");
  return *p;
}

DomainSet union_of_domains(const std::vector<Cuboid>& cuboids) {
  DomainSet out;
  for (const Cuboid& c : cuboids) out = domain_union(out, c.domains());
  return out;
}

// Per-dimension closest pair between two boxes. Where the intervals overlap, both
// points take the overlap's midpoint.
std::pair<Point, Point> closest_pair(const Cuboid& a, const Cuboid& b) {
  const std::size_t n = a.lower().size();
  Point pa(n, 0.0), pb(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    const double lo = std::max(a.lower(d), b.lower(d));
    const double hi = std::min(a.upper(d), b.upper(d));
    if (lo <= hi) {
      const double mid = std::isfinite(lo) ? 0.5 * (lo + hi) : 0.0;
      pa[d] = pb[d] = mid;
    } else if (a.upper(d) < b.lower(d)) {
      pa[d] = a.upper(d);
      pb[d] = b.lower(d);
    } else {
      pa[d] = a.lower(d);
      pb[d] = b.upper(d);
    }
  }
  return {std::move(pa), std::move(pb)};
}

std::vector<Cuboid> closest_point_seeds(const Core& a, const Core& b) {
  const DomainSet domains = domain_union(a.domains(), b.domains());
  const Weights unit = Weights::uniform(a.space(), domains);
  double best = std::numeric_limits<double>::infinity();
  std::vector<Cuboid> seeds;
  for (const Cuboid& ca : a.cuboids()) {
    for (const Cuboid& cb : b.cuboids()) {
      auto [pa, pb] = closest_pair(ca, cb);
      const double dist = combined_distance(pa, pb, unit);
      if (dist < best) {
        best = dist;
        const DomainSet span = domain_union(ca.domains(), cb.domains());
        seeds = {Cuboid::point(a.space(), span, pa), Cuboid::point(a.space(), span, pb)};
      }
    }
  }
  return seeds;
}

Core assemble(DomainSet domains, std::vector<Cuboid> cuboids) {
  drop_redundant(cuboids);
  if (!central_region(cuboids)) cuboids = repair(cuboids);
  return Core(std::move(domains), std::move(cuboids));
}

}  // namespace

Core::Core(DomainSet domains, std::vector<Cuboid> cuboids)
    : domains_(std::move(domains)),
      cuboids_(std::move(cuboids)),
      central_(checked_central(domains_, cuboids_)) {}

Core::Core(std::vector<Cuboid> cuboids)
    : domains_(union_of_domains(cuboids)),
      cuboids_(std::move(cuboids)),
      central_(checked_central(domains_, cuboids_)) {}

bool Core::contains(Coords x) const {
  return std::any_of(cuboids_.begin(), cuboids_.end(),
                     [&](const Cuboid& c) { return cuboid_contains(c, x); });
}

Core core_intersect(const Core& a, const Core& b) {
  if (!same_space(a.space(), b.space())) {
    throw ValidationError("cannot intersect cores from different spaces");
  }
  std::vector<Cuboid> pieces;
  for (const Cuboid& ca : a.cuboids()) {
    for (const Cuboid& cb : b.cuboids()) {
      if (auto both = cuboid_intersect(ca, cb)) pieces.push_back(std::move(*both));
    }
  }
  if (pieces.empty()) pieces = closest_point_seeds(a, b);
  return assemble(domain_union(a.domains(), b.domains()), std::move(pieces));
}

Core core_union(const Core& a, const Core& b) {
  if (!same_space(a.space(), b.space())) {
    throw ValidationError("cannot unite cores from different spaces");
  }
  std::vector<Cuboid> pieces = a.cuboids();
  pieces.insert(pieces.end(), b.cuboids().begin(), b.cuboids().end());
  return assemble(domain_union(a.domains(), b.domains()), std::move(pieces));
}

Core core_project(const Core& core, const DomainSet& domains) {
  if (domains.empty()) throw ValidationError("cannot project onto an empty domain set");
  if (!domain_subset(domains, core.domains())) {
    throw ValidationError("projection domains must be a subset of the core's domains");
  }
  std::vector<Cuboid> pieces;
  pieces.reserve(core.cuboids().size());
  for (const Cuboid& c : core.cuboids()) {
    pieces.push_back(cuboid_project(c, domain_intersection(domains, c.domains())));
  }
  drop_redundant(pieces);
  return Core(domains, std::move(pieces));
}

}  // namespace cspace
