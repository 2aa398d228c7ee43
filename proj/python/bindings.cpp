#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cspace/concept.hpp"
#include "cspace/error.hpp"
#include "cspace/kb.hpp"

namespace py = pybind11;
using namespace cspace;

namespace {

using MutableSpace = std::shared_ptr<SpaceSpec>;

MutableSpace handle(const SpacePtr& p) { return std::const_pointer_cast<SpaceSpec>(p); }

// Points come in either as a full coordinate list or as {dimension: value}, with
// unnamed dimensions at 0.
Point to_point(const SpaceSpec& sp, const py::object& obj) {
  if (py::isinstance<py::dict>(obj)) {
    Point x(sp.dimension_count(), 0.0);
    for (auto [key, value] : obj.cast<py::dict>()) {
      x[sp.dimension_index(key.cast<std::string>())] = value.cast<double>();
    }
    return x;
  }
  Point x = obj.cast<Point>();
  check_point(sp, x);
  return x;
}

DomainSet to_domains(const SpaceSpec& sp, const std::vector<std::string>& names) {
  std::vector<DomainId> ids;
  for (const auto& n : names) ids.push_back(sp.domain_id(n));
  return make_domain_set(std::move(ids));
}

std::vector<std::string> domain_names(const SpaceSpec& sp, const DomainSet& ids) {
  std::vector<std::string> out;
  for (DomainId id : ids) out.push_back(sp.domain(id).name);
  return out;
}

}  // namespace

PYBIND11_MODULE(_cspace, m) {
  m.doc() = "Concepts as fuzzy simple star-shaped sets in a conceptual space.";

  static py::exception<Error> error(m, "CspaceError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<SpaceSpec, MutableSpace>(m, "Space")
      .def(py::init([](const std::vector<std::pair<std::string, std::vector<std::string>>>& doms) {
             std::vector<Domain> domains;
             for (const auto& [name, dims] : doms) domains.push_back({name, dims});
             return std::make_shared<SpaceSpec>(std::move(domains));
           }),
           py::arg("domains"), "Domains as a list of (name, [dimension names]).")
      .def_property_readonly("dimension_count", &SpaceSpec::dimension_count)
      .def_property_readonly("domain_names",
                             [](const SpaceSpec& s) { return domain_names(s, s.all_domains()); })
      .def_property_readonly("dimension_names",
                             [](const SpaceSpec& s) {
                               std::vector<std::string> out;
                               for (std::size_t d = 0; d < s.dimension_count(); ++d) {
                                 out.push_back(s.dimension_name(d));
                               }
                               return out;
                             })
      .def("point", [](const SpaceSpec& s, const py::object& obj) { return to_point(s, obj); });

  py::class_<Weights>(m, "Weights")
      .def(py::init([](const MutableSpace& space, const std::map<std::string, double>& domains,
                       const std::map<std::string, double>& dimensions, bool normalize) {
             std::vector<double> dw(space->domain_count(), 0.0);
             std::vector<double> dimw(space->dimension_count(), 0.0);
             std::vector<DomainId> ids;
             for (const auto& [n, w] : domains) {
               ids.push_back(space->domain_id(n));
               dw[ids.back()] = w;
             }
             for (const auto& [n, w] : dimensions) dimw[space->dimension_index(n)] = w;
             DomainSet set = make_domain_set(std::move(ids));
             return normalize ? Weights::normalized(space, set, dw, dimw)
                              : Weights(space, set, dw, dimw);
           }),
           py::arg("space"), py::arg("domains"), py::arg("dimensions"),
           py::arg("normalize") = false)
      .def_static(
          "uniform",
          [](const MutableSpace& space, const std::vector<std::string>& names) {
            return Weights::uniform(space, to_domains(*space, names));
          },
          py::arg("space"), py::arg("domains"))
      .def("domain_weight", [](const Weights& w, const std::string& n) {
        return w.domain_weight(w.space()->domain_id(n));
      })
      .def("dimension_weight", [](const Weights& w, const std::string& n) {
        return w.dimension_weight(w.space()->dimension_index(n));
      });

  py::class_<Cuboid>(m, "Cuboid")
      .def(py::init([](const MutableSpace& space,
                       const std::map<std::string, std::pair<double, double>>& bounds) {
             const double inf = std::numeric_limits<double>::infinity();
             Point lo(space->dimension_count(), -inf), hi(space->dimension_count(), inf);
             for (const auto& [n, b] : bounds) {
               const std::size_t d = space->dimension_index(n);
               lo[d] = b.first;
               hi[d] = b.second;
             }
             return Cuboid::from_bounds(space, std::move(lo), std::move(hi));
           }),
           py::arg("space"), py::arg("bounds"), "Bounds as {dimension: (lo, hi)}.")
      .def_property_readonly("lower", [](const Cuboid& c) { return c.lower(); })
      .def_property_readonly("upper", [](const Cuboid& c) { return c.upper(); })
      .def("contains", [](const Cuboid& c, const py::object& x) {
        return cuboid_contains(c, to_point(*c.space(), x));
      });

  py::class_<Core>(m, "Core")
      .def(py::init<std::vector<Cuboid>>(), py::arg("cuboids"))
      .def_property_readonly("cuboids", &Core::cuboids)
      .def_property_readonly("central_region", &Core::central_region)
      .def_property_readonly("domains",
                             [](const Core& c) { return domain_names(*c.space(), c.domains()); })
      .def("contains",
           [](const Core& c, const py::object& x) { return c.contains(to_point(*c.space(), x)); });

  py::class_<Concept>(m, "Concept")
      .def(py::init<Core, double, double, Weights>(), py::arg("core"), py::arg("mu0"),
           py::arg("c"), py::arg("weights"))
      .def_property_readonly("core", &Concept::core)
      .def_property_readonly("mu0", &Concept::mu0)
      .def_property_readonly("c", &Concept::c)
      .def_property_readonly("weights", &Concept::weights)
      .def_property_readonly("space", [](const Concept& k) { return handle(k.space()); })
      .def_property_readonly("domains",
                             [](const Concept& k) { return domain_names(*k.space(), k.domains()); })
      .def("membership",
           [](const Concept& k, const py::object& x) {
             return membership(k, to_point(*k.space(), x));
           })
      .def("to_json", &describe_concept);

  m.def(
      "membership",
      [](const Concept& k, const py::object& x) { return membership(k, to_point(*k.space(), x)); },
      py::arg("concept"), py::arg("point"));
  m.def(
      "intersect",
      [](const Concept& a, const Concept& b, double s, double t, double tol) {
        SolverOptions opts;
        opts.tolerance = tol;
        return intersect(a, b, CombinationParams{s, t}, opts);
      },
      py::arg("a"), py::arg("b"), py::arg("s") = 0.5, py::arg("t") = 0.5,
      py::arg("tolerance") = 1e-6);
  m.def(
      "union",
      [](const Concept& a, const Concept& b, double s, double t) {
        return unite(a, b, CombinationParams{s, t});
      },
      py::arg("a"), py::arg("b"), py::arg("s") = 0.5, py::arg("t") = 0.5);
  m.def(
      "project",
      [](const Concept& k, const std::vector<std::string>& names) {
        return project(k, to_domains(*k.space(), names));
      },
      py::arg("concept"), py::arg("domains"));
  m.def(
      "height_of_intersection",
      [](const Concept& a, const Concept& b, double tol) {
        SolverOptions opts;
        opts.tolerance = tol;
        const OptimResult r = height_of_intersection(a, b, opts);
        py::dict out;
        out["value"] = r.value;
        out["witness"] = r.witness;
        out["converged"] = r.converged;
        out["iterations"] = r.iterations;
        out["gap"] = r.gap;
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("tolerance") = 1e-6);
  m.def(
      "combine_adjective_noun",
      [](const Concept& property, const Concept& noun, double threshold) {
        return combine_adjective_noun(property, noun, threshold);
      },
      py::arg("property"), py::arg("noun"), py::arg("threshold") = 0.5);
  m.def(
      "subsethood_check",
      [](const Concept& a, const Concept& b, std::size_t samples, std::uint64_t seed) {
        const SubsethoodReport r = subsethood_check(a, b, samples, seed);
        py::dict out;
        out["holds"] = r.holds;
        out["worst_excess"] = r.worst_excess;
        out["witness"] = r.witness ? py::cast(*r.witness) : py::none();
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("samples") = 3000, py::arg("seed") = 0);

  py::class_<KnowledgeBase>(m, "KnowledgeBase")
      .def(py::init([](const MutableSpace& space) { return KnowledgeBase(space); }),
           py::arg("space"))
      .def_property_readonly("space", [](const KnowledgeBase& kb) { return handle(kb.space()); })
      .def_property_readonly("names",
                             [](const KnowledgeBase& kb) {
                               std::vector<std::string> out;
                               for (const auto& [n, _] : kb.concepts()) out.push_back(n);
                               return out;
                             })
      .def("add", [](const KnowledgeBase& kb, std::string name,
                     const Concept& k) { return add_concept(kb, std::move(name), k); })
      .def("get", [](const KnowledgeBase& kb, const std::string& name) {
        return get_concept(kb, name);
      })
      .def("remove", [](const KnowledgeBase& kb, const std::string& name) {
        return remove_concept(kb, name);
      })
      .def("serialize", &serialize);

  m.def(
      "load",
      [](const std::filesystem::path& path, bool auto_normalize) {
        return load(path, LoadOptions{auto_normalize});
      },
      py::arg("path"), py::arg("auto_normalize") = false);
  m.def("save", &save, py::arg("kb"), py::arg("path"));
}
