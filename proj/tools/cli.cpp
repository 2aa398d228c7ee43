#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cspace/concept.hpp"
#include "cspace/error.hpp"
#include "cspace/grid.hpp"
#include "cspace/kb.hpp"

namespace cspace::cli {

namespace {

/// Malformed flag values; reported with the usage exit code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw UsageError("invalid number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

// "key=value,key=value"
std::vector<std::pair<std::string, std::string>> parse_assignments(std::string_view s,
                                                                   std::string_view what) {
  std::vector<std::pair<std::string, std::string>> out;
  if (s.empty()) return out;
  for (const std::string& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw UsageError("expected name=value in " + std::string(what) + ", got '" + item + "'");
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

std::pair<double, double> parse_interval(std::string_view s, std::string_view what) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) {
    throw UsageError("expected lo:hi in " + std::string(what) + ", got '" + std::string(s) + "'");
  }
  return {parse_double(parts[0], what), parse_double(parts[1], what)};
}

Cuboid parse_cuboid(const SpacePtr& space, std::string_view text) {
  const double inf = std::numeric_limits<double>::infinity();
  Point lower(space->dimension_count(), -inf);
  Point upper(space->dimension_count(), inf);
  for (const auto& [dim, range] : parse_assignments(text, "--cuboid")) {
    const std::size_t d = space->dimension_index(dim);
    std::tie(lower[d], upper[d]) = parse_interval(range, "--cuboid");
  }
  return Cuboid::from_bounds(space, std::move(lower), std::move(upper));
}

// Coordinates given on the command line; the rest default to the center of the
// concept's central region. Returns the point and the defaulted dimension indices.
std::pair<Point, std::vector<std::size_t>> resolve_point(const Concept& k, std::string_view text) {
  const SpaceSpec& sp = *k.space();
  Point x = k.core().central_region().center(0.0);
  std::vector<bool> given(sp.dimension_count(), false);
  for (const auto& [dim, value] : parse_assignments(text, "--point")) {
    const std::size_t d = sp.dimension_index(dim);
    x[d] = parse_double(value, "--point");
    given[d] = true;
  }
  std::vector<std::size_t> defaulted;
  for (std::size_t d : sp.dimensions_of(k.domains())) {
    if (!given[d]) defaulted.push_back(d);
  }
  return {std::move(x), std::move(defaulted)};
}

std::string describe_coords(const SpaceSpec& sp, Coords x, std::span<const std::size_t> dims) {
  std::string out;
  for (std::size_t d : dims) {
    if (!out.empty()) out += ',';
    out += sp.dimension_name(d) + "=" + format_number(x[d]);
  }
  return out;
}

double resolve_tolerance(std::optional<double> flag, const KnowledgeBase& kb) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CSPACE_TOLERANCE"); env && *env) {
    const double v = parse_double(env, "CSPACE_TOLERANCE");
    if (!(v > 0.0)) throw UsageError("CSPACE_TOLERANCE must be positive");
    return v;
  }
  return kb.defaults().tolerance;
}

std::string summary(const std::string& name, const Concept& k) {
  std::string domains;
  for (DomainId id : k.domains()) {
    if (!domains.empty()) domains += ',';
    domains += k.space()->domain(id).name;
  }
  return name + ": mu0=" + format_number(k.mu0()) + " c=" + format_number(k.c()) +
         " cuboids=" + std::to_string(k.core().cuboids().size()) + " domains=" + domains;
}

struct Options {
  std::string kb_path = "kb.json";
  bool auto_normalize = false;

  // space init
  std::vector<std::string> domains;
  bool force = false;
  std::optional<double> s, t, threshold, tol;

  // shared
  std::string name, other, out_name, point;

  // concept add
  std::vector<std::string> cuboids;
  double mu0 = 1.0;
  double c = 1.0;
  std::vector<std::string> domain_weights, dim_weights;

  // project / export
  std::string project_domains, grid_dims, grid_range, grid_step = "0.01", out_file = "-";
  bool witness = false;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conceptual-space concepts: membership, intersection, union, projection"};
  app.name("cspace");
  app.require_subcommand(1);
  Options opt;
  app.add_option("--kb", opt.kb_path, "Knowledge base file")->capture_default_str();
  app.add_flag("--auto-normalize", opt.auto_normalize,
               "Rescale weights that violate normalization instead of rejecting them");

  auto* space = app.add_subcommand("space", "Manage the space definition");
  space->require_subcommand(1);
  auto* space_init = space->add_subcommand("init", "Create a knowledge base for a new space");
  space_init->add_option("--domain", opt.domains, "Domain as name=dim1,dim2 (repeatable)")
      ->required();
  space_init->add_flag("--force", opt.force, "Overwrite an existing knowledge base");
  space_init->add_option("--s", opt.s, "Default domain-weight mixing factor");
  space_init->add_option("--t", opt.t, "Default dimension-weight mixing factor");
  space_init->add_option("--threshold", opt.threshold, "Default adjective-noun threshold");
  space_init->add_option("--tolerance", opt.tol, "Default solver tolerance");

  auto* concept_cmd = app.add_subcommand("concept", "Manage stored concepts");
  concept_cmd->require_subcommand(1);
  auto* c_add = concept_cmd->add_subcommand("add", "Add a concept");
  c_add->add_option("name", opt.name)->required();
  c_add->add_option("--cuboid", opt.cuboids, "Cuboid as dim=lo:hi,... (repeatable)")->required();
  c_add->add_option("--mu0", opt.mu0, "Peak membership")->capture_default_str();
  c_add->add_option("--c", opt.c, "Sensitivity")->capture_default_str();
  c_add->add_option("--domain-weight", opt.domain_weights, "Domain weight as name=w");
  c_add->add_option("--dim-weight", opt.dim_weights, "Dimension weight as dim=w");
  auto* c_show = concept_cmd->add_subcommand("show", "Print a concept as JSON");
  c_show->add_option("name", opt.name)->required();
  auto* c_list = concept_cmd->add_subcommand("list", "List concept names");
  auto* c_rm = concept_cmd->add_subcommand("rm", "Remove a concept");
  c_rm->add_option("name", opt.name)->required();

  auto* memb = app.add_subcommand("membership", "Membership of a point in a concept");
  memb->add_option("concept", opt.name)->required();
  memb->add_option("--point", opt.point, "Coordinates as dim=value,...");

  auto* inter = app.add_subcommand("intersect", "Intersect two concepts");
  auto* uni = app.add_subcommand("union", "Unite two concepts");
  for (auto* sub : {inter, uni}) {
    sub->add_option("a", opt.name)->required();
    sub->add_option("b", opt.other)->required();
    sub->add_option("--s", opt.s, "Domain-weight mixing factor");
    sub->add_option("--t", opt.t, "Dimension-weight mixing factor");
    sub->add_option("--out", opt.out_name, "Name for the stored result")->required();
  }
  inter->add_option("--tol", opt.tol, "Solver tolerance");

  auto* proj = app.add_subcommand("project", "Project a concept onto some of its domains");
  proj->add_option("concept", opt.name)->required();
  proj->add_option("--domains", opt.project_domains, "Comma-separated domain names")->required();
  proj->add_option("--out", opt.out_name, "Name for the stored result")->required();

  auto* comb = app.add_subcommand("combine", "Adjective-noun combination");
  comb->add_option("property", opt.name)->required();
  comb->add_option("noun", opt.other)->required();
  comb->add_option("--threshold", opt.threshold, "Height threshold for plain intersection");
  comb->add_option("--s", opt.s, "Domain-weight mixing factor");
  comb->add_option("--t", opt.t, "Dimension-weight mixing factor");
  comb->add_option("--tol", opt.tol, "Solver tolerance");
  comb->add_option("--out", opt.out_name, "Name for the stored result")->required();

  auto* height = app.add_subcommand("alpha-height", "Height of intersection of two concepts");
  height->add_option("a", opt.name)->required();
  height->add_option("b", opt.other)->required();
  height->add_option("--tol", opt.tol, "Solver tolerance");
  height->add_flag("--witness", opt.witness, "Also print the maximizing point");

  auto* grid = app.add_subcommand("export-grid", "Write a membership grid as CSV");
  grid->add_option("concept", opt.name)->required();
  grid->add_option("--dims", opt.grid_dims, "Two dimensions as d1,d2")->required();
  grid->add_option("--range", opt.grid_range, "Ranges as d1=lo:hi,d2=lo:hi")->required();
  grid->add_option("--step", opt.grid_step, "Step, or d1step,d2step")->capture_default_str();
  grid->add_option("--point", opt.point, "Slice coordinates for the other dimensions");
  grid->add_option("--out", opt.out_file, "Output file, - for stdout")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Load and check the knowledge base");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const LoadOptions load_opts{opt.auto_normalize};
  auto open = [&] { return load(opt.kb_path, load_opts); };
  auto params_for = [&](const KnowledgeBase& kb) {
    CombinationParams p = kb.defaults().params;
    if (opt.s) p.s = *opt.s;
    if (opt.t) p.t = *opt.t;
    return p;
  };

  try {
    if (space_init->parsed()) {
      if (!opt.force && std::filesystem::exists(opt.kb_path)) {
        throw Error("knowledge base '" + opt.kb_path + "' exists (use --force to overwrite)");
      }
      std::vector<Domain> doms;
      for (const std::string& d : opt.domains) {
        const auto eq = d.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw UsageError("expected --domain name=dim1,dim2, got '" + d + "'");
        }
        doms.push_back({d.substr(0, eq), split(std::string_view(d).substr(eq + 1), ',')});
      }
      KbDefaults defaults;
      if (opt.s) defaults.params.s = *opt.s;
      if (opt.t) defaults.params.t = *opt.t;
      if (opt.threshold) defaults.threshold = *opt.threshold;
      if (opt.tol) defaults.tolerance = *opt.tol;
      KnowledgeBase kb(make_space(std::move(doms)), defaults);
      save(kb, opt.kb_path);
      out << "initialized " << opt.kb_path << " with " << kb.space()->domain_count()
          << " domains, " << kb.space()->dimension_count() << " dimensions\n";
      return kExitOk;
    }

    if (c_add->parsed()) {
      KnowledgeBase kb = open();
      const SpacePtr& sp = kb.space();
      std::vector<Cuboid> cuboids;
      for (const std::string& text : opt.cuboids) cuboids.push_back(parse_cuboid(sp, text));
      DomainSet domains;
      for (const Cuboid& cub : cuboids) domains = domain_union(domains, cub.domains());
      if (domains.empty()) throw UsageError("cuboids must bound at least one domain");

      const Weights base = Weights::uniform(sp, domains);
      std::vector<double> dw = base.domain_weights();
      std::vector<double> dimw = base.dimension_weights();
      for (const std::string& item : opt.domain_weights) {
        for (const auto& [name, value] : parse_assignments(item, "--domain-weight")) {
          dw[sp->domain_id(name)] = parse_double(value, "--domain-weight");
        }
      }
      for (const std::string& item : opt.dim_weights) {
        for (const auto& [name, value] : parse_assignments(item, "--dim-weight")) {
          dimw[sp->dimension_index(name)] = parse_double(value, "--dim-weight");
        }
      }
      Weights w = opt.auto_normalize ? Weights::normalized(sp, domains, dw, dimw)
                                     : Weights(sp, domains, dw, dimw);
      Concept k(Core(domains, std::move(cuboids)), opt.mu0, opt.c, std::move(w));
      kb = add_concept(kb, opt.name, k);
      save(kb, opt.kb_path);
      out << "added " << summary(opt.name, k) << "\n";
      return kExitOk;
    }

    if (c_show->parsed()) {
      out << describe_concept(get_concept(open(), opt.name)) << "\n";
      return kExitOk;
    }

    if (c_list->parsed()) {
      const KnowledgeBase kb = open();
      for (const auto& [name, k] : kb.concepts()) out << summary(name, k) << "\n";
      return kExitOk;
    }

    if (c_rm->parsed()) {
      KnowledgeBase kb = remove_concept(open(), opt.name);
      save(kb, opt.kb_path);
      out << "removed " << opt.name << "\n";
      return kExitOk;
    }

    if (memb->parsed()) {
      const KnowledgeBase kb = open();
      const Concept& k = get_concept(kb, opt.name);
      auto [x, defaulted] = resolve_point(k, opt.point);
      if (!defaulted.empty()) {
        out << "defaulted " << describe_coords(*k.space(), x, defaulted) << "\n";
      }
      out << format_number(membership(k, x)) << "\n";
      return kExitOk;
    }

    if (inter->parsed() || uni->parsed() || comb->parsed()) {
      KnowledgeBase kb = open();
      const Concept& a = get_concept(kb, opt.name);
      const Concept& b = get_concept(kb, opt.other);
      const CombinationParams params = params_for(kb);
      SolverOptions solver;
      solver.tolerance = resolve_tolerance(opt.tol, kb);
      std::optional<Concept> result;
      if (inter->parsed()) {
        result = intersect(a, b, params, solver);
      } else if (uni->parsed()) {
        result = unite(a, b, params);
      } else {
        result = combine_adjective_noun(a, b, opt.threshold.value_or(kb.defaults().threshold),
                                        params, solver);
      }
      kb = add_concept(kb, opt.out_name, *result);
      save(kb, opt.kb_path);
      out << "stored " << summary(opt.out_name, *result) << "\n";
      return kExitOk;
    }

    if (proj->parsed()) {
      KnowledgeBase kb = open();
      const Concept& k = get_concept(kb, opt.name);
      std::vector<DomainId> ids;
      for (const std::string& name : split(opt.project_domains, ',')) {
        ids.push_back(kb.space()->domain_id(name));
      }
      Concept result = project(k, make_domain_set(std::move(ids)));
      kb = add_concept(kb, opt.out_name, result);
      save(kb, opt.kb_path);
      out << "stored " << summary(opt.out_name, result) << "\n";
      return kExitOk;
    }

    if (height->parsed()) {
      const KnowledgeBase kb = open();
      const Concept& a = get_concept(kb, opt.name);
      const Concept& b = get_concept(kb, opt.other);
      SolverOptions solver;
      solver.tolerance = resolve_tolerance(opt.tol, kb);
      const OptimResult r = height_of_intersection(a, b, solver);
      out << format_number(r.value) << "\n";
      if (opt.witness) {
        const auto dims = kb.space()->dimensions_of(domain_union(a.domains(), b.domains()));
        out << "witness " << describe_coords(*kb.space(), r.witness, dims) << "\n";
      }
      if (!r.converged) {
        err << "warning: solver stopped with optimality gap " << format_number(r.gap)
            << " above tolerance " << format_number(solver.tolerance) << "\n";
      }
      return kExitOk;
    }

    if (grid->parsed()) {
      const KnowledgeBase kb = open();
      const Concept& k = get_concept(kb, opt.name);
      const SpaceSpec& sp = *kb.space();
      const auto dim_names = split(opt.grid_dims, ',');
      if (dim_names.size() != 2) throw UsageError("--dims needs exactly two dimensions");
      const std::array<std::size_t, 2> dims{sp.dimension_index(dim_names[0]),
                                            sp.dimension_index(dim_names[1])};
      std::map<std::size_t, std::pair<double, double>> ranges;
      for (const auto& [dim, range] : parse_assignments(opt.grid_range, "--range")) {
        ranges[sp.dimension_index(dim)] = parse_interval(range, "--range");
      }
      std::array<double, 2> lower{}, upper{}, steps{};
      for (std::size_t i = 0; i < 2; ++i) {
        auto it = ranges.find(dims[i]);
        if (it == ranges.end()) throw UsageError("--range is missing '" + dim_names[i] + "'");
        std::tie(lower[i], upper[i]) = it->second;
      }
      const auto step_parts = split(opt.grid_step, ',');
      if (step_parts.size() == 1) {
        steps[0] = steps[1] = parse_double(step_parts[0], "--step");
      } else if (step_parts.size() == 2) {
        steps[0] = parse_double(step_parts[0], "--step");
        steps[1] = parse_double(step_parts[1], "--step");
      } else {
        throw UsageError("--step takes one or two values");
      }
      auto [slice, defaulted] = resolve_point(k, opt.point);
      const GridExport g = export_grid(k, dims, lower, upper, steps, slice);
      const std::string csv = to_csv(g);
      if (opt.out_file == "-") {
        out << csv;
      } else {
        std::ofstream file(opt.out_file, std::ios::binary | std::ios::trunc);
        if (!file) throw Error("cannot open '" + opt.out_file + "' for writing");
        file << csv;
        std::erase_if(defaulted, [&](std::size_t d) { return d == dims[0] || d == dims[1]; });
        if (!defaulted.empty()) {
          out << "defaulted " << describe_coords(sp, slice, defaulted) << "\n";
        }
        out << "wrote " << g.rows.size() << " rows to " << opt.out_file << "\n";
      }
      return kExitOk;
    }

    if (validate->parsed()) {
      const KnowledgeBase kb = open();
      out << "ok: " << kb.concepts().size() << " concepts, " << kb.space()->domain_count()
          << " domains, " << kb.space()->dimension_count() << " dimensions\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }

  err << app.help();
  return kExitUsage;
}

}  // namespace cspace::cli
