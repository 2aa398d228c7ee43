#include "cspace/kb.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cspace/error.hpp"
#include "json.hpp"

namespace cspace {

using nlohmann::json;

void KbDefaults::validate() const {
  params.validate();
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("default threshold must lie in [0, 1]");
  }
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw ValidationError("default tolerance must be positive");
  }
}

KnowledgeBase::KnowledgeBase(SpacePtr space, KbDefaults defaults)
    : space_(std::move(space)), defaults_(defaults) {
  if (!space_) throw ValidationError("knowledge base needs a space");
  defaults_.validate();
}

KnowledgeBase KnowledgeBase::with_defaults(KbDefaults defaults) const {
  defaults.validate();
  KnowledgeBase out = *this;
  out.defaults_ = defaults;
  return out;
}

KnowledgeBase add_concept(const KnowledgeBase& kb, std::string name, Concept value) {
  if (name.empty()) throw ValidationError("concept names must be non-empty");
  if (kb.contains(name)) throw ValidationError("concept '" + name + "' already exists");
  if (!same_space(kb.space(), value.space())) {
    throw ValidationError("concept '" + name + "' does not belong to the knowledge base's space");
  }
  KnowledgeBase out = kb;
  out.concepts_.emplace(std::move(name), std::move(value));
  return out;
}

const Concept& get_concept(const KnowledgeBase& kb, std::string_view name) {
  auto it = kb.concepts().find(name);
  if (it == kb.concepts().end()) {
    throw LookupError("no concept named '" + std::string(name) + "'");
  }
  return it->second;
}

KnowledgeBase remove_concept(const KnowledgeBase& kb, std::string_view name) {
  auto it = kb.concepts().find(name);
  if (it == kb.concepts().end()) {
    throw LookupError("no concept named '" + std::string(name) + "'");
  }
  KnowledgeBase out = kb;
  out.concepts_.erase(std::string(name));
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json bound(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json concept_json(const Concept& value) {
  const SpaceSpec& sp = *value.space();
  const std::vector<std::size_t> dims = sp.dimensions_of(value.domains());

  json cuboids = json::array();
  for (const Cuboid& c : value.core().cuboids()) {
    json names = json::array();
    for (DomainId id : c.domains()) names.push_back(sp.domain(id).name);
    json lo = json::object();
    json hi = json::object();
    for (std::size_t d : dims) {
      lo[sp.dimension_name(d)] = bound(c.lower(d));
      hi[sp.dimension_name(d)] = bound(c.upper(d));
    }
    cuboids.push_back({{"domains", names}, {"p_min", lo}, {"p_max", hi}});
  }

  json domain_weights = json::object();
  json dimension_weights = json::object();
  for (DomainId id : value.domains()) {
    domain_weights[sp.domain(id).name] = value.weights().domain_weight(id);
    for (std::size_t d : sp.dimensions_of(id)) {
      dimension_weights[sp.dimension_name(d)] = value.weights().dimension_weight(d);
    }
  }

  return {{"cuboids", cuboids},
          {"mu0", value.mu0()},
          {"c", value.c()},
          {"weights", {{"domains", domain_weights}, {"dimensions", dimension_weights}}}};
}

json kb_json(const KnowledgeBase& kb) {
  json domains = json::array();
  for (const Domain& d : kb.space()->domains()) {
    domains.push_back({{"name", d.name}, {"dimensions", d.dimensions}});
  }
  json concepts = json::object();
  for (const auto& [name, value] : kb.concepts()) concepts[name] = concept_json(value);
  const KbDefaults& def = kb.defaults();
  return {{"format_version", KnowledgeBase::kFormatVersion},
          {"space", {{"domains", domains}}},
          {"defaults",
           {{"s", def.params.s},
            {"t", def.params.t},
            {"threshold", def.threshold},
            {"tolerance", def.tolerance}}},
          {"concepts", concepts}};
}

// Schema accessors with messages that name the offending path.
const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError("schema violation: " + where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("schema violation: " + where + " is missing '" + key + "'");
  }
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("schema violation: " + where + " must be a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError("schema violation: " + where + " must be a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError("schema violation: " + where + " must be an array");
  return v;
}

const json& object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ParseError("schema violation: " + where + " must be an object");
  return v;
}

SpacePtr space_from_json(const json& root) {
  const json& space = object(field(root, "space", "file"), "space");
  std::vector<Domain> domains;
  for (const json& d : array(field(space, "domains", "space"), "space.domains")) {
    Domain dom;
    dom.name = text(field(d, "name", "space.domains[]"), "domain name");
    for (const json& dim : array(field(d, "dimensions", "domain '" + dom.name + "'"),
                                 "dimensions of '" + dom.name + "'")) {
      dom.dimensions.push_back(text(dim, "dimension name in '" + dom.name + "'"));
    }
    domains.push_back(std::move(dom));
  }
  return make_space(std::move(domains));
}

Cuboid cuboid_from_json(const json& obj, const SpacePtr& space, const DomainSet& concept_domains,
                        const std::string& where) {
  const SpaceSpec& sp = *space;
  std::vector<DomainId> ids;
  for (const json& n : array(field(obj, "domains", where), where + ".domains")) {
    ids.push_back(sp.domain_id(text(n, where + ".domains[]")));
  }
  const std::size_t declared = ids.size();
  DomainSet domains = make_domain_set(std::move(ids));
  if (domains.size() != declared) {
    throw ValidationError(where + " lists a domain twice");
  }

  Point lower(sp.dimension_count(), -kInf);
  Point upper(sp.dimension_count(), kInf);
  auto read = [&](const char* key, Point& out, double missing) {
    for (const auto& [dim, v] : object(field(obj, key, where), where + "." + key).items()) {
      const std::size_t d = sp.dimension_index(dim);
      if (!domain_contains(concept_domains, sp.domain_of_dimension(d))) {
        throw ValidationError(where + " bounds dimension '" + dim +
                              "' outside the concept's domains");
      }
      out[d] = v.is_null() ? missing : number(v, where + "." + key + "." + dim);
    }
  };
  read("p_min", lower, -kInf);
  read("p_max", upper, kInf);
  return Cuboid(space, std::move(domains), std::move(lower), std::move(upper));
}

Concept concept_from_json(const json& obj, const SpacePtr& space, const LoadOptions& options) {
  const SpaceSpec& sp = *space;
  const json& weights = field(obj, "weights", "concept");

  std::vector<double> dw(sp.domain_count(), 0.0);
  std::vector<DomainId> ids;
  for (const auto& [name, v] : object(field(weights, "domains", "weights"), "weights.domains").items()) {
    const DomainId id = sp.domain_id(name);
    ids.push_back(id);
    dw[id] = number(v, "weights.domains." + name);
  }
  const DomainSet domains = make_domain_set(ids);

  std::vector<double> dimw(sp.dimension_count(), 0.0);
  for (const auto& [name, v] :
       object(field(weights, "dimensions", "weights"), "weights.dimensions").items()) {
    const std::size_t d = sp.dimension_index(name);
    if (!domain_contains(domains, sp.domain_of_dimension(d))) {
      throw ValidationError("dimension weight for '" + name + "' outside the concept's domains");
    }
    dimw[d] = number(v, "weights.dimensions." + name);
  }

  std::vector<Cuboid> cuboids;
  const json& list = array(field(obj, "cuboids", "concept"), "cuboids");
  for (std::size_t i = 0; i < list.size(); ++i) {
    cuboids.push_back(cuboid_from_json(list[i], space, domains, "cuboid " + std::to_string(i)));
  }

  Weights w = options.auto_normalize ? Weights::normalized(space, domains, dw, dimw)
                                     : Weights(space, domains, dw, dimw);
  return Concept(Core(domains, std::move(cuboids)), number(field(obj, "mu0", "concept"), "mu0"),
                 number(field(obj, "c", "concept"), "c"), std::move(w));
}

}  // namespace

std::string serialize(const KnowledgeBase& kb) { return kb_json(kb).dump(2) + "\n"; }

std::string describe_concept(const Concept& value) { return concept_json(value).dump(2); }

KnowledgeBase deserialize(std::string_view text_in, const LoadOptions& options) {
  json root;
  try {
    root = json::parse(text_in.begin(), text_in.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!root.is_object()) throw ParseError("schema violation: top level must be an object");

  const json& version = field(root, "format_version", "file");
  if (!version.is_number_integer() || version.get<long long>() != KnowledgeBase::kFormatVersion) {
    throw ValidationError("unsupported format_version " + version.dump() + " (expected " +
                     std::to_string(KnowledgeBase::kFormatVersion) + ")");
  }

  SpacePtr space = space_from_json(root);

  KbDefaults defaults;
  if (auto it = root.find("defaults"); it != root.end()) {
    const json& d = object(*it, "defaults");
    if (d.contains("s")) defaults.params.s = number(d["s"], "defaults.s");
    if (d.contains("t")) defaults.params.t = number(d["t"], "defaults.t");
    if (d.contains("threshold")) defaults.threshold = number(d["threshold"], "defaults.threshold");
    if (d.contains("tolerance")) defaults.tolerance = number(d["tolerance"], "defaults.tolerance");
  }
  KnowledgeBase kb(space, defaults);

  if (auto it = root.find("concepts"); it != root.end()) {
    for (const auto& [name, obj] : object(*it, "concepts").items()) {
      try {
        kb = add_concept(kb, name, concept_from_json(obj, space, options));
      } catch (const ParseError& e) {
        throw ParseError("concept '" + name + "': " + e.what());
      } catch (const LookupError& e) {
        throw LookupError("concept '" + name + "': " + e.what());
      } catch (const Error& e) {
        throw ValidationError("concept '" + name + "': " + e.what());
      }
    }
  }
  return kb;
}

void save(const KnowledgeBase& kb, const std::filesystem::path& path) {
  const std::string content = serialize(kb);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot replace '" + path.string() + "': " + ec.message());
}

KnowledgeBase load(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open knowledge base '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str(), options);
}

}  // namespace cspace
