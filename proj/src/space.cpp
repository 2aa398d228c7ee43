#include "cspace/space.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include "cspace/error.hpp"

namespace cspace {

SpaceSpec::SpaceSpec(std::vector<Domain> domains) : domains_(std::move(domains)) {
  if (domains_.empty()) {
    throw ValidationError("space must contain at least one domain");
  }
  for (DomainId id = 0; id < domains_.size(); ++id) {
    const Domain& dom = domains_[id];
    if (dom.name.empty()) {
      throw ValidationError("domain names must be non-empty");
    }
    if (!domain_lookup_.emplace(dom.name, id).second) {
      throw ValidationError("duplicate domain name '" + dom.name + "'");
    }
    if (dom.dimensions.empty()) {
      throw ValidationError("domain '" + dom.name + "' has no dimensions");
    }
    auto& dims = domain_dims_.emplace_back();
    for (const std::string& dim : dom.dimensions) {
      if (dim.empty()) {
        throw ValidationError("dimension names in domain '" + dom.name + "' must be non-empty");
      }
      const std::size_t index = dimension_names_.size();
      if (!dimension_lookup_.emplace(dim, index).second) {
        throw ValidationError("duplicate dimension name '" + dim + "'");
      }
      dimension_names_.push_back(dim);
      dim_domain_.push_back(id);
      dims.push_back(index);
    }
  }
}

std::optional<DomainId> SpaceSpec::find_domain(std::string_view name) const {
  auto it = domain_lookup_.find(name);
  if (it == domain_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> SpaceSpec::find_dimension(std::string_view name) const {
  auto it = dimension_lookup_.find(name);
  if (it == dimension_lookup_.end()) return std::nullopt;
  return it->second;
}

DomainId SpaceSpec::domain_id(std::string_view name) const {
  if (auto id = find_domain(name)) return *id;
  throw LookupError("unknown domain '" + std::string(name) + "'");
}

std::size_t SpaceSpec::dimension_index(std::string_view name) const {
  if (auto idx = find_dimension(name)) return *idx;
  throw LookupError("unknown dimension '" + std::string(name) + "'");
}

DomainSet SpaceSpec::all_domains() const {
  DomainSet all(domains_.size());
  std::iota(all.begin(), all.end(), DomainId{0});
  return all;
}

std::vector<std::size_t> SpaceSpec::dimensions_of(const DomainSet& domains) const {
  std::vector<std::size_t> dims;
  for (DomainId id : domains) {
    const auto& d = domain_dims_.at(id);
    dims.insert(dims.end(), d.begin(), d.end());
  }
  std::sort(dims.begin(), dims.end());
  return dims;
}

SpacePtr make_space(std::vector<Domain> domains) {
  return std::make_shared<const SpaceSpec>(std::move(domains));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  return a && b && *a == *b;
}

DomainSet make_domain_set(std::vector<DomainId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

DomainSet domain_union(const DomainSet& a, const DomainSet& b) {
  DomainSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

DomainSet domain_intersection(const DomainSet& a, const DomainSet& b) {
  DomainSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

DomainSet domain_difference(const DomainSet& a, const DomainSet& b) {
  DomainSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool domain_subset(const DomainSet& sub, const DomainSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool domain_contains(const DomainSet& set, DomainId id) {
  return std::binary_search(set.begin(), set.end(), id);
}

void check_point(const SpaceSpec& space, Coords x) {
  if (x.size() != space.dimension_count()) {
    throw ValidationError("point has " + std::to_string(x.size()) + " coordinates, space has " +
                          std::to_string(space.dimension_count()) + " dimensions");
  }
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (!std::isfinite(x[d])) {
      throw ValidationError("coordinate '" + space.dimension_name(d) + "' is not finite");
    }
  }
}

namespace {

void check_domain_set(const SpaceSpec& space, const DomainSet& domains) {
  if (domains.empty()) {
    throw ValidationError("weights must cover at least one domain");
  }
  if (!std::is_sorted(domains.begin(), domains.end()) ||
      std::adjacent_find(domains.begin(), domains.end()) != domains.end()) {
    throw ValidationError("domain set must be sorted and duplicate-free");
  }
  if (domains.back() >= space.domain_count()) {
    throw LookupError("domain id " + std::to_string(domains.back()) + " out of range");
  }
}

void check_sizes(const SpaceSpec& space, const std::vector<double>& domain_weights,
                 const std::vector<double>& dimension_weights) {
  if (domain_weights.size() != space.domain_count()) {
    throw ValidationError("expected " + std::to_string(space.domain_count()) +
                          " domain weights, got " + std::to_string(domain_weights.size()));
  }
  if (dimension_weights.size() != space.dimension_count()) {
    throw ValidationError("expected " + std::to_string(space.dimension_count()) +
                          " dimension weights, got " + std::to_string(dimension_weights.size()));
  }
}

void require_positive(double w, const std::string& what) {
  if (!std::isfinite(w) || w <= 0.0) {
    throw ValidationError("weight of " + what + " must be positive and finite");
  }
}

}  // namespace

Weights::Weights(SpacePtr space, DomainSet domains, std::vector<double> domain_weights,
                 std::vector<double> dimension_weights)
    : space_(std::move(space)), domains_(std::move(domains)) {
  if (!space_) throw ValidationError("weights need a space");
  const SpaceSpec& sp = *space_;
  check_domain_set(sp, domains_);
  check_sizes(sp, domain_weights, dimension_weights);

  domain_weights_.assign(sp.domain_count(), 0.0);
  dimension_weights_.assign(sp.dimension_count(), 0.0);

  double domain_sum = 0.0;
  for (DomainId id : domains_) {
    const std::string& name = sp.domain(id).name;
    require_positive(domain_weights[id], "domain '" + name + "'");
    domain_weights_[id] = domain_weights[id];
    domain_sum += domain_weights[id];

    double dim_sum = 0.0;
    for (std::size_t dim : sp.dimensions_of(id)) {
      require_positive(dimension_weights[dim], "dimension '" + sp.dimension_name(dim) + "'");
      dimension_weights_[dim] = dimension_weights[dim];
      dim_sum += dimension_weights[dim];
    }
    if (std::abs(dim_sum - 1.0) > kWeightTolerance) {
      throw ValidationError("dimension weights of domain '" + name + "' sum to " +
                            std::to_string(dim_sum) + ", expected 1");
    }
  }
  const double expected = static_cast<double>(domains_.size());
  if (std::abs(domain_sum - expected) > kWeightTolerance) {
    throw ValidationError("domain weights sum to " + std::to_string(domain_sum) + ", expected " +
                          std::to_string(domains_.size()) +
                          " (enable auto-normalization to rescale)");
  }
}

Weights Weights::normalized(SpacePtr space, DomainSet domains, std::vector<double> domain_weights,
                            std::vector<double> dimension_weights) {
  if (!space) throw ValidationError("weights need a space");
  check_domain_set(*space, domains);
  check_sizes(*space, domain_weights, dimension_weights);

  double domain_sum = 0.0;
  for (DomainId id : domains) {
    require_positive(domain_weights[id], "domain '" + space->domain(id).name + "'");
    domain_sum += domain_weights[id];
    double dim_sum = 0.0;
    for (std::size_t dim : space->dimensions_of(id)) {
      require_positive(dimension_weights[dim], "dimension '" + space->dimension_name(dim) + "'");
      dim_sum += dimension_weights[dim];
    }
    for (std::size_t dim : space->dimensions_of(id)) dimension_weights[dim] /= dim_sum;
  }
  const double scale = static_cast<double>(domains.size()) / domain_sum;
  for (DomainId id : domains) domain_weights[id] *= scale;
  return Weights(std::move(space), std::move(domains), std::move(domain_weights),
                 std::move(dimension_weights));
}

Weights Weights::uniform(SpacePtr space, DomainSet domains) {
  if (!space) throw ValidationError("weights need a space");
  check_domain_set(*space, domains);
  std::vector<double> dw(space->domain_count(), 0.0);
  std::vector<double> dimw(space->dimension_count(), 0.0);
  for (DomainId id : domains) {
    dw[id] = 1.0;
    const auto dims = space->dimensions_of(id);
    for (std::size_t dim : dims) dimw[dim] = 1.0 / static_cast<double>(dims.size());
  }
  // 1/k summed k times may be off by an ulp; the constructor tolerance absorbs it.
  return Weights(std::move(space), std::move(domains), std::move(dw), std::move(dimw));
}

bool Weights::operator==(const Weights& other) const {
  return same_space(space_, other.space_) && domains_ == other.domains_ &&
         domain_weights_ == other.domain_weights_ &&
         dimension_weights_ == other.dimension_weights_;
}

double domain_distance(Coords x, Coords y, DomainId domain, const Weights& weights) {
  const SpaceSpec& sp = *weights.space();
  if (domain >= sp.domain_count()) {
    throw LookupError("unknown domain id " + std::to_string(domain));
  }
  if (!weights.covers(domain)) {
    throw LookupError("weights do not cover domain '" + sp.domain(domain).name + "'");
  }
  double sum = 0.0;
  for (std::size_t dim : sp.dimensions_of(domain)) {
    const double diff = x[dim] - y[dim];
    sum += weights.dimension_weight(dim) * diff * diff;
  }
  return std::sqrt(sum);
}

double combined_distance(Coords x, Coords y, const Weights& weights) {
  const SpaceSpec& sp = *weights.space();
  if (x.size() != sp.dimension_count() || y.size() != sp.dimension_count()) {
    throw ValidationError("point dimensionality does not match the space");
  }
  double total = 0.0;
  for (DomainId id : weights.domains()) {
    double sum = 0.0;
    for (std::size_t dim : sp.dimensions_of(id)) {
      const double diff = x[dim] - y[dim];
      sum += weights.dimension_weight(dim) * diff * diff;
    }
    total += weights.domain_weight(id) * std::sqrt(sum);
  }
  return total;
}

double similarity(Coords x, Coords y, double c, const Weights& weights) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ValidationError("similarity sensitivity c must be positive");
  }
  return std::exp(-c * combined_distance(x, y, weights));
}

bool between(Coords x, Coords y, Coords z, const Weights& weights, std::optional<double> tol) {
  const double xz = combined_distance(x, z, weights);
  const double limit = tol.value_or(1e-9 * (1.0 + xz));
  return std::abs(combined_distance(x, y, weights) + combined_distance(y, z, weights) - xz) <=
         limit;
}

}  // namespace cspace
