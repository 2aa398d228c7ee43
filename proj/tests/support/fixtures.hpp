#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cspace/concept.hpp"
#include "cspace/optimize.hpp"

namespace cspace::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One domain "line" with a single dimension "x".
inline SpacePtr line_space() { return make_space({{"line", {"x"}}}); }

/// Two single-dimension domains, combined with the Manhattan metric.
inline SpacePtr plane_space() { return make_space({{"horizontal", {"x"}}, {"vertical", {"y"}}}); }

/// Three domains of two dimensions each.
inline SpacePtr six_space() {
  return make_space({{"color", {"hue", "saturation"}},
                     {"shape", {"roundness", "elongation"}},
                     {"taste", {"sweetness", "sourness"}}});
}

/// Box from {dimension: (lo, hi)}; the domain set is inferred.
inline Cuboid box(const SpacePtr& sp, const std::map<std::string, std::pair<double, double>>& b) {
  Point lo(sp->dimension_count(), -kInf), hi(sp->dimension_count(), kInf);
  for (const auto& [name, range] : b) {
    const std::size_t d = sp->dimension_index(name);
    lo[d] = range.first;
    hi[d] = range.second;
  }
  return Cuboid::from_bounds(sp, lo, hi);
}

inline Concept uniform_concept(std::vector<Cuboid> cuboids, double mu0, double c) {
  Core core(std::move(cuboids));
  Weights w = Weights::uniform(core.space(), core.domains());
  return Concept(std::move(core), mu0, c, std::move(w));
}

inline Point at(const SpacePtr& sp, const std::map<std::string, double>& coords) {
  Point x(sp->dimension_count(), 0.0);
  for (const auto& [name, v] : coords) x[sp->dimension_index(name)] = v;
  return x;
}

/// The three-cuboid fixture: x and y in separate domains, equal weights.
inline Concept three_cuboid_concept(const SpacePtr& plane) {
  return uniform_concept({box(plane, {{"x", {0.35, 0.65}}, {"y", {0.15, 0.85}}}),
                          box(plane, {{"x", {0.15, 0.60}}, {"y", {0.40, 0.60}}}),
                          box(plane, {{"x", {0.30, 0.85}}, {"y", {0.45, 0.70}}})},
                         1.0, 10.0);
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::size_t index(std::size_t count) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng_);
  }
  std::mt19937_64& engine() { return rng_; }

  Point point(const SpacePtr& sp, double lo, double hi) {
    Point x(sp->dimension_count());
    for (double& v : x) v = uniform(lo, hi);
    return x;
  }

  /// Random non-empty subset of the space's domains with between lo and hi members.
  DomainSet domains(const SpacePtr& sp, std::size_t lo, std::size_t hi) {
    std::vector<DomainId> all = sp->all_domains();
    std::shuffle(all.begin(), all.end(), rng_);
    const std::size_t count = lo + index(std::min(hi, all.size()) - lo + 1);
    all.resize(count);
    return make_domain_set(std::move(all));
  }

  /// Raw weights in [0.2, 1], rescaled onto the normalization constraints.
  Weights weights(const SpacePtr& sp, const DomainSet& domains) {
    std::vector<double> dw(sp->domain_count(), 0.0), dimw(sp->dimension_count(), 0.0);
    for (DomainId id : domains) {
      dw[id] = uniform(0.2, 1.0);
      for (std::size_t d : sp->dimensions_of(id)) dimw[d] = uniform(0.2, 1.0);
    }
    return Weights::normalized(sp, domains, dw, dimw);
  }

  /// Weights whose domain weights sum to |block| within each block separately.
  Weights block_weights(const SpacePtr& sp, const DomainSet& first, const DomainSet& second) {
    const DomainSet all = domain_union(first, second);
    Weights base = weights(sp, all);
    std::vector<double> dw(sp->domain_count(), 0.0);
    for (const DomainSet* block : {&first, &second}) {
      double sum = 0.0;
      std::vector<double> raw;
      for (DomainId id : *block) {
        raw.push_back(uniform(0.2, 1.0));
        sum += raw.back();
      }
      for (std::size_t i = 0; i < block->size(); ++i) {
        dw[(*block)[i]] = raw[i] * static_cast<double>(block->size()) / sum;
      }
    }
    return Weights(sp, all, dw, base.dimension_weights());
  }

  /// Cuboids around a shared anchor, so the central region is never empty.
  std::vector<Cuboid> cuboids(const SpacePtr& sp, const DomainSet& domains, std::size_t count,
                              double spread = 2.0) {
    Point anchor(sp->dimension_count(), 0.0);
    const auto dims = sp->dimensions_of(domains);
    for (std::size_t d : dims) anchor[d] = uniform(-spread, spread);
    std::vector<Cuboid> out;
    for (std::size_t i = 0; i < count; ++i) {
      Point lo(sp->dimension_count(), -kInf), hi(sp->dimension_count(), kInf);
      for (std::size_t d : dims) {
        lo[d] = anchor[d] - uniform(0.0, 1.5);
        hi[d] = anchor[d] + uniform(0.0, 1.5);
      }
      out.emplace_back(sp, domains, lo, hi);
    }
    return out;
  }

  Concept concept_on(const SpacePtr& sp, const DomainSet& domains, const Weights& w) {
    return Concept(Core(domains, cuboids(sp, domains, 1 + index(3))), uniform(0.3, 1.0),
                   uniform(0.5, 3.0), w);
  }

  /// 1-3 domains, 1-3 cuboids, random mu0, c and weights.
  Concept any_concept(const SpacePtr& sp) {
    const DomainSet ds = domains(sp, 1, 3);
    return concept_on(sp, ds, weights(sp, ds));
  }

  /// Uniform point inside a box, using [lo, hi] on unbounded dimensions.
  Point inside(const Cuboid& c, double lo = -3.0, double hi = 3.0) {
    Point x(c.lower().size());
    for (std::size_t d = 0; d < x.size(); ++d) {
      x[d] = c.bounded(d) ? uniform(c.lower(d), c.upper(d)) : uniform(lo, hi);
    }
    return x;
  }

  /// Sample from the alpha-cut of a concept by rejection from per-cuboid bounding boxes.
  Point in_alpha_cut(const Concept& k, double alpha) {
    for (int tries = 0; tries < 100000; ++tries) {
      const Cuboid& c = k.core().cuboids()[index(k.core().cuboids().size())];
      const Point x = inside(alpha_cut_bbox(c, k.mu0(), k.c(), k.weights(), alpha));
      if (membership(k, x) >= alpha) return x;
    }
    return k.core().central_region().center();
  }

  /// y between p and z under the combined metric: each domain moves independently
  /// along its own segment.
  Point between_point(const SpaceSpec& sp, const DomainSet& domains, const Point& p,
                      const Point& z) {
    Point y = p;
    for (DomainId id : domains) {
      const double t = uniform(0.0, 1.0);
      for (std::size_t d : sp.dimensions_of(id)) y[d] = p[d] + t * (z[d] - p[d]);
    }
    return y;
  }

 private:
  std::mt19937_64 rng_;
};

/// Points spread over a concept pair: inside cores, around them, and far away.
inline Point probe(Random& r, const Concept& a, const Concept& b, std::size_t i) {
  const Concept& k = (i % 2 == 0) ? a : b;
  const Cuboid& c = k.core().cuboids()[r.index(k.core().cuboids().size())];
  const double reach = 2.0 / std::min(a.c(), b.c());
  switch (i % 3) {
    case 0:
      return r.inside(c);
    case 1:
      return r.inside(alpha_cut_bbox(c, 1.0, 1.0, Weights::uniform(c.space(), k.domains()),
                                     std::exp(-reach)));
    default:
      return r.point(c.space(), -8.0, 8.0);
  }
}

}  // namespace cspace::testing
