#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cspace {

/// Coordinates for every dimension of a space, in declaration order.
using Point = std::vector<double>;
using Coords = std::span<const double>;

using DomainId = std::size_t;
/// Sorted, duplicate-free list of domain ids.
using DomainSet = std::vector<DomainId>;

inline constexpr double kWeightTolerance = 1e-9;

struct Domain {
  std::string name;
  std::vector<std::string> dimensions;

  bool operator==(const Domain&) const = default;
};

/// Dimensions grouped into domains. Dimension indices follow declaration order,
/// domain by domain.
class SpaceSpec {
 public:
  explicit SpaceSpec(std::vector<Domain> domains);

  std::size_t dimension_count() const { return dimension_names_.size(); }
  std::size_t domain_count() const { return domains_.size(); }

  const std::vector<Domain>& domains() const { return domains_; }
  const Domain& domain(DomainId id) const { return domains_.at(id); }
  /// Indices of the dimensions that make up a domain.
  std::span<const std::size_t> dimensions_of(DomainId id) const { return domain_dims_.at(id); }
  DomainId domain_of_dimension(std::size_t dim) const { return dim_domain_.at(dim); }
  const std::string& dimension_name(std::size_t dim) const { return dimension_names_.at(dim); }

  std::optional<DomainId> find_domain(std::string_view name) const;
  std::optional<std::size_t> find_dimension(std::string_view name) const;
  /// Throwing lookups; the message names the missing entry.
  DomainId domain_id(std::string_view name) const;
  std::size_t dimension_index(std::string_view name) const;

  DomainSet all_domains() const;
  /// Every dimension index covered by the given domains, ascending.
  std::vector<std::size_t> dimensions_of(const DomainSet& domains) const;

  bool operator==(const SpaceSpec& other) const { return domains_ == other.domains_; }

 private:
  std::vector<Domain> domains_;
  std::vector<std::vector<std::size_t>> domain_dims_;
  std::vector<DomainId> dim_domain_;
  std::vector<std::string> dimension_names_;
  std::map<std::string, DomainId, std::less<>> domain_lookup_;
  std::map<std::string, std::size_t, std::less<>> dimension_lookup_;
};

using SpacePtr = std::shared_ptr<const SpaceSpec>;

SpacePtr make_space(std::vector<Domain> domains);

/// Two handles describe the same space (same object or structurally equal).
bool same_space(const SpacePtr& a, const SpacePtr& b);

// Domain-set algebra. Inputs must be sorted and unique; so are the outputs.
DomainSet make_domain_set(std::vector<DomainId> ids);
DomainSet domain_union(const DomainSet& a, const DomainSet& b);
DomainSet domain_intersection(const DomainSet& a, const DomainSet& b);
DomainSet domain_difference(const DomainSet& a, const DomainSet& b);
bool domain_subset(const DomainSet& sub, const DomainSet& super);
bool domain_contains(const DomainSet& set, DomainId id);

/// Throws ValidationError unless x has one finite coordinate per dimension.
void check_point(const SpaceSpec& space, Coords x);

/// Context parameter: positive domain weights summing to |domains| and, per domain,
/// positive dimension weights summing to one. Entries outside the covered domains are zero.
class Weights {
 public:
  /// domain_weights is indexed by DomainId, dimension_weights by dimension index;
  /// both are full length. Throws ValidationError on any normalization violation.
  Weights(SpacePtr space, DomainSet domains, std::vector<double> domain_weights,
          std::vector<double> dimension_weights);

  /// Rescales positive raw weights so that both normalization constraints hold.
  static Weights normalized(SpacePtr space, DomainSet domains, std::vector<double> domain_weights,
                            std::vector<double> dimension_weights);
  /// Domain weights 1, dimension weights 1/|domain|.
  static Weights uniform(SpacePtr space, DomainSet domains);

  const SpacePtr& space() const { return space_; }
  const DomainSet& domains() const { return domains_; }
  bool covers(DomainId id) const { return domain_contains(domains_, id); }
  double domain_weight(DomainId id) const { return domain_weights_.at(id); }
  double dimension_weight(std::size_t dim) const { return dimension_weights_.at(dim); }
  const std::vector<double>& domain_weights() const { return domain_weights_; }
  const std::vector<double>& dimension_weights() const { return dimension_weights_; }

  bool operator==(const Weights& other) const;

 private:
  SpacePtr space_;
  DomainSet domains_;
  std::vector<double> domain_weights_;
  std::vector<double> dimension_weights_;
};

/// Weighted Euclidean distance restricted to one domain.
double domain_distance(Coords x, Coords y, DomainId domain, const Weights& weights);

/// Weighted Manhattan combination of the per-domain Euclidean distances over
/// weights.domains().
double combined_distance(Coords x, Coords y, const Weights& weights);

/// exp(-c * combined_distance). Throws ValidationError for c <= 0.
double similarity(Coords x, Coords y, double c, const Weights& weights);

/// y lies between x and z: |d(x,y) + d(y,z) - d(x,z)| <= tol. The default
/// tolerance is 1e-9 * (1 + d(x,z)).
bool between(Coords x, Coords y, Coords z, const Weights& weights,
             std::optional<double> tol = std::nullopt);

}  // namespace cspace
