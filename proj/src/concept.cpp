#include "cspace/concept.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cspace/error.hpp"

namespace cspace {

void CombinationParams::validate() const {
  if (!(s >= 0.0 && s <= 1.0) || !(t >= 0.0 && t <= 1.0)) {
    throw ValidationError("combination parameters s and t must lie in [0, 1]");
  }
}

Concept::Concept(Core core, double mu0, double c, Weights weights)
    : core_(std::move(core)), mu0_(mu0), c_(c), weights_(std::move(weights)) {
  if (!(mu0_ > 0.0 && mu0_ <= 1.0)) throw ValidationError("mu0 must lie in (0, 1]");
  if (!(c_ > 0.0) || !std::isfinite(c_)) throw ValidationError("c must be positive and finite");
  if (!same_space(core_.space(), weights_.space())) {
    throw ValidationError("core and weights belong to different spaces");
  }
  if (weights_.domains() != core_.domains()) {
    throw ValidationError("weights must cover exactly the core's domains");
  }
}

double membership(const Concept& k, Coords x) {
  double nearest = std::numeric_limits<double>::infinity();
  for (const Cuboid& c : k.core().cuboids()) {
    nearest = std::min(nearest, distance_to_cuboid(x, c, k.weights()));
    if (nearest == 0.0) break;
  }
  return k.mu0() * std::exp(-k.c() * nearest);
}

bool alpha_cut_contains(const Concept& k, Coords x, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  return membership(k, x) >= alpha;
}

namespace {

double mix(double f, double a, double b) { return a == b ? a : f * a + (1.0 - f) * b; }

void require_same_space(const Concept& a, const Concept& b) {
  if (!same_space(a.space(), b.space())) {
    throw ValidationError("concepts live in different spaces");
  }
}

bool cores_meet(const Core& a, const Core& b) {
  for (const Cuboid& ca : a.cuboids()) {
    for (const Cuboid& cb : b.cuboids()) {
      if (cuboid_intersect(ca, cb)) return true;
    }
  }
  return false;
}

Core alpha_cut_core(const Concept& k, double alpha) {
  std::vector<Cuboid> boxes;
  boxes.reserve(k.core().cuboids().size());
  for (const Cuboid& c : k.core().cuboids()) {
    boxes.push_back(alpha_cut_bbox(c, k.mu0(), k.c(), k.weights(), alpha));
  }
  return Core(k.domains(), std::move(boxes));
}

}  // namespace

Weights combine_weights(const Weights& a, const Weights& b, const CombinationParams& params) {
  params.validate();
  if (!same_space(a.space(), b.space())) {
    throw ValidationError("weights belong to different spaces");
  }
  const SpaceSpec& sp = *a.space();
  const DomainSet domains = domain_union(a.domains(), b.domains());
  std::vector<double> dw(sp.domain_count(), 0.0);
  std::vector<double> dimw(sp.dimension_count(), 0.0);
  for (DomainId id : domains) {
    const bool in_a = a.covers(id);
    const bool in_b = b.covers(id);
    if (in_a && in_b) {
      dw[id] = mix(params.s, a.domain_weight(id), b.domain_weight(id));
      for (std::size_t d : sp.dimensions_of(id)) {
        dimw[d] = mix(params.t, a.dimension_weight(d), b.dimension_weight(d));
      }
    } else {
      const Weights& src = in_a ? a : b;
      dw[id] = src.domain_weight(id);
      for (std::size_t d : sp.dimensions_of(id)) dimw[d] = src.dimension_weight(d);
    }
  }

  const double expected = static_cast<double>(domains.size());
  double sum = 0.0;
  for (DomainId id : domains) sum += dw[id];
  if (std::abs(sum - expected) > 1e-12 * expected) {
    for (DomainId id : domains) dw[id] *= expected / sum;
  }
  return Weights(a.space(), domains, std::move(dw), std::move(dimw));
}

Concept intersect(const Concept& a, const Concept& b, const CombinationParams& params,
                  const SolverOptions& options) {
  require_same_space(a, b);
  params.validate();
  const OptimResult height = height_of_intersection(a, b, options);
  const double alpha = height.value;
  if (!(alpha >= options.alpha_floor)) {
    throw NumericError("height of intersection " + std::to_string(alpha) +
                       " is below the floor; the concepts are effectively unrelated");
  }

  Weights weights = combine_weights(a.weights(), b.weights(), params);
  const double c = std::min(a.c(), b.c());

  if (alpha == std::min(a.mu0(), b.mu0()) && cores_meet(a.core(), b.core())) {
    return Concept(core_intersect(a.core(), b.core()), alpha, c, std::move(weights));
  }
  return Concept(core_intersect(alpha_cut_core(a, alpha), alpha_cut_core(b, alpha)), alpha, c,
                 std::move(weights));
}

Concept unite(const Concept& a, const Concept& b, const CombinationParams& params) {
  require_same_space(a, b);
  params.validate();
  return Concept(core_union(a.core(), b.core()), std::max(a.mu0(), b.mu0()),
                 std::min(a.c(), b.c()), combine_weights(a.weights(), b.weights(), params));
}

Concept project(const Concept& k, const DomainSet& domains) {
  if (domains == k.domains()) return k;
  Core core = core_project(k.core(), domains);

  const Weights& w = k.weights();
  double sum = 0.0;
  for (DomainId id : domains) sum += w.domain_weight(id);
  std::vector<double> dw(w.domain_weights().size(), 0.0);
  const double count = static_cast<double>(domains.size());
  for (DomainId id : domains) dw[id] = count * w.domain_weight(id) / sum;

  std::vector<double> dimw(w.dimension_weights().size(), 0.0);
  for (std::size_t d : k.space()->dimensions_of(domains)) dimw[d] = w.dimension_weight(d);

  return Concept(std::move(core), k.mu0(), k.c(), Weights(k.space(), domains, dw, dimw));
}

SubsethoodReport subsethood_check(const Concept& a, const Concept& b, std::size_t sample_count,
                                  std::uint64_t seed) {
  require_same_space(a, b);
  if (sample_count == 0) throw ValidationError("subsethood check needs at least one sample");

  const std::size_t n = a.space()->dimension_count();
  const double inf = std::numeric_limits<double>::infinity();
  Point lo(n, inf), hi(n, -inf);
  std::vector<const Cuboid*> all;
  for (const Concept* k : {&a, &b}) {
    for (const Cuboid& c : k->core().cuboids()) {
      all.push_back(&c);
      for (std::size_t d = 0; d < n; ++d) {
        if (!c.bounded(d)) continue;
        lo[d] = std::min(lo[d], c.lower(d));
        hi[d] = std::max(hi[d], c.upper(d));
      }
    }
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (lo[d] > hi[d]) {
      lo[d] = -1.0;
      hi[d] = 1.0;
    }
  }
  const double scale = std::max(1.0 / a.c(), 1.0 / b.c());

  std::mt19937_64 rng(seed);
  auto uniform = [&](double l, double h) {
    return l == h ? l : std::uniform_real_distribution<double>(l, h)(rng);
  };
  auto pick = [&](std::size_t count) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
  };

  SubsethoodReport report;
  report.samples = sample_count;
  report.worst_excess = -inf;
  Point x(n);
  for (std::size_t i = 0; i < sample_count; ++i) {
    switch (i % 3) {
      case 0: {  // inside the candidate subset's core
        const Cuboid& c = a.core().cuboids()[pick(a.core().cuboids().size())];
        for (std::size_t d = 0; d < n; ++d) {
          x[d] = c.bounded(d) ? uniform(c.lower(d), c.upper(d)) : uniform(lo[d], hi[d]);
        }
        break;
      }
      case 1: {  // around either core's boundary
        const Cuboid& c = *all[pick(all.size())];
        for (std::size_t d = 0; d < n; ++d) {
          const double l = c.bounded(d) ? c.lower(d) : lo[d];
          const double h = c.bounded(d) ? c.upper(d) : hi[d];
          x[d] = uniform(l - scale, h + scale);
        }
        break;
      }
      default: {  // far field
        for (std::size_t d = 0; d < n; ++d) {
          const double pad = 10.0 * scale + (hi[d] - lo[d]);
          x[d] = uniform(lo[d] - pad, hi[d] + pad);
        }
        break;
      }
    }
    const double excess = membership(a, x) - membership(b, x);
    report.worst_excess = std::max(report.worst_excess, excess);
    if (excess > 1e-9 && report.holds) {
      report.holds = false;
      report.witness = x;
    }
  }
  return report;
}

Concept combine_adjective_noun(const Concept& property, const Concept& noun, double threshold,
                               const CombinationParams& params, const SolverOptions& options) {
  require_same_space(property, noun);
  if (property.domains().size() != 1) {
    throw ValidationError("a property must span exactly one domain");
  }
  const DomainId domain = property.domains().front();
  if (!domain_contains(noun.domains(), domain)) {
    throw ValidationError("the property's domain '" + property.space()->domain(domain).name +
                          "' is not part of the noun");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("combination threshold must lie in [0, 1]");
  }

  const double height = height_of_intersection(property, noun, options).value;
  if (height >= threshold) return intersect(property, noun, params, options);

  const DomainSet rest = domain_difference(noun.domains(), property.domains());
  if (rest.empty()) return property;
  return intersect(property, project(noun, rest), params, options);
}

}  // namespace cspace
