#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "cspace/concept.hpp"
#include "cspace/space.hpp"

namespace cspace {

struct KbDefaults {
  CombinationParams params;
  /// Adjective-noun threshold on the height of intersection.
  double threshold = 0.5;
  /// Solver tolerance for the height of intersection.
  double tolerance = 1e-6;

  void validate() const;
  bool operator==(const KbDefaults& other) const {
    return params.s == other.params.s && params.t == other.params.t &&
           threshold == other.threshold && tolerance == other.tolerance;
  }
};

struct LoadOptions {
  /// Rescale weights that violate the normalization constraints instead of rejecting them.
  bool auto_normalize = false;
};

/// A space and a set of named concepts living in it. Values are immutable; the
/// mutating operations return updated copies.
class KnowledgeBase {
 public:
  static constexpr int kFormatVersion = 1;

  explicit KnowledgeBase(SpacePtr space, KbDefaults defaults = {});

  const SpacePtr& space() const { return space_; }
  const KbDefaults& defaults() const { return defaults_; }
  const std::map<std::string, Concept, std::less<>>& concepts() const { return concepts_; }
  bool contains(std::string_view name) const { return concepts_.find(name) != concepts_.end(); }

  KnowledgeBase with_defaults(KbDefaults defaults) const;

 private:
  friend KnowledgeBase add_concept(const KnowledgeBase&, std::string, Concept);
  friend KnowledgeBase remove_concept(const KnowledgeBase&, std::string_view);

  SpacePtr space_;
  KbDefaults defaults_;
  std::map<std::string, Concept, std::less<>> concepts_;
};

/// Throws ValidationError for an empty or taken name or a concept from another space.
KnowledgeBase add_concept(const KnowledgeBase& kb, std::string name, Concept value);
/// Throws LookupError for unknown names.
const Concept& get_concept(const KnowledgeBase& kb, std::string_view name);
KnowledgeBase remove_concept(const KnowledgeBase& kb, std::string_view name);

/// Deterministic JSON text: sorted keys, shortest round-trip floats, infinite bounds
/// written as null.
std::string serialize(const KnowledgeBase& kb);
/// Throws ParseError (with line/column) or ValidationError naming the concept and rule.
KnowledgeBase deserialize(std::string_view text, const LoadOptions& options = {});

/// Writes through a temporary file and renames it into place; concurrent writers
/// resolve as last-writer-wins.
void save(const KnowledgeBase& kb, const std::filesystem::path& path);
KnowledgeBase load(const std::filesystem::path& path, const LoadOptions& options = {});

/// The JSON object stored for one concept, pretty-printed.
std::string describe_concept(const Concept& value);

}  // namespace cspace
