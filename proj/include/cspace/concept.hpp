#pragma once

#include <cstdint>
#include <optional>

#include "cspace/geometry.hpp"
#include "cspace/optimize.hpp"
#include "cspace/space.hpp"

namespace cspace {

/// Mixing factors for weights defined on both operands: s for domain weights,
/// t for dimension weights.
struct CombinationParams {
  double s = 0.5;
  double t = 0.5;

  /// Throws ValidationError unless both lie in [0, 1].
  void validate() const;
};

/// Fuzzy simple star-shaped set: a crisp core, the peak membership mu0, the decay
/// rate c and context weights over the core's domains.
///
///   membership(x) = mu0 * exp(-c * min_{y in core} d(x, y))
class Concept {
 public:
  Concept(Core core, double mu0, double c, Weights weights);

  const Core& core() const { return core_; }
  double mu0() const { return mu0_; }
  double c() const { return c_; }
  const Weights& weights() const { return weights_; }
  const SpacePtr& space() const { return core_.space(); }
  const DomainSet& domains() const { return core_.domains(); }

  bool operator==(const Concept& other) const {
    return core_ == other.core_ && mu0_ == other.mu0_ && c_ == other.c_ &&
           weights_ == other.weights_;
  }

 private:
  Core core_;
  double mu0_;
  double c_;
  Weights weights_;
};

double membership(const Concept& k, Coords x);

/// membership(k, x) >= alpha; alpha must lie in (0, 1].
bool alpha_cut_contains(const Concept& k, Coords x, double alpha);

/// Convex combination on shared domains/dimensions, copies elsewhere. Domain weights
/// are rescaled only if their sum drifts from the domain count.
Weights combine_weights(const Weights& a, const Weights& b, const CombinationParams& params);

/// Modified intersection. mu0' is the height of intersection alpha', c' = min(c),
/// the core is the repaired intersection of the alpha'-cuts. When alpha' equals
/// min(mu0) and the cores meet, the cores are intersected directly; otherwise each
/// alpha'-cut is approximated by per-cuboid bounding boxes first.
/// Throws NumericError if alpha' drops below options.alpha_floor.
Concept intersect(const Concept& a, const Concept& b, const CombinationParams& params = {},
                  const SolverOptions& options = {});

/// Modified union: repaired union of the cores, mu0' = max(mu0), c' and weights as
/// for intersect.
Concept unite(const Concept& a, const Concept& b, const CombinationParams& params = {});

/// Subspace projection. mu0 and c are kept; domain weights are rescaled to sum to
/// |domains|.
Concept project(const Concept& k, const DomainSet& domains);

struct SubsethoodReport {
  bool holds = true;
  std::size_t samples = 0;
  /// Largest membership(a) - membership(b) seen.
  double worst_excess = 0.0;
  /// First sampled point violating subsethood.
  std::optional<Point> witness;
};

/// Sampled test of membership(a, x) <= membership(b, x) + 1e-9. Samples are spread
/// over three strata: inside a's cuboids, near either core, and a wide far field.
SubsethoodReport subsethood_check(const Concept& a, const Concept& b, std::size_t sample_count,
                                  std::uint64_t seed = 0);

/// Adjective-noun combination. A property spanning one domain narrows the noun
/// (plain intersection) when their height of intersection reaches `threshold`, and
/// replaces the noun's information on that domain otherwise. A noun living only on
/// the property's domain is replaced by the property outright.
Concept combine_adjective_noun(const Concept& property, const Concept& noun,
                               double threshold = 0.5, const CombinationParams& params = {},
                               const SolverOptions& options = {});

}  // namespace cspace
