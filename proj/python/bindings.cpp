// Python bindings for the sasm core. Specs travel as opaque handles with
// JSON in/out; configurations and sub-configurations cross the boundary as
// plain {site: height} dicts.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sasm/builders.hpp"
#include "sasm/fscgen.hpp"
#include "sasm/model.hpp"
#include "sasm/oracle.hpp"
#include "sasm/reduce.hpp"

namespace py = pybind11;

namespace {

using HeightMap = std::map<std::string, int>;

sasm::Configuration to_config(const sasm::CompiledSpec& cs, const HeightMap& heights) {
  if (heights.size() != static_cast<std::size_t>(cs.site_count())) {
    throw sasm::SchemaError("heights", "heights must cover exactly the spec's sites");
  }
  sasm::Configuration config;
  config.heights.resize(cs.site_count());
  for (const auto& [site, h] : heights) config.heights[cs.site_index(site)] = h;
  return config;
}

HeightMap from_config(const sasm::CompiledSpec& cs, const sasm::Configuration& config) {
  HeightMap heights;
  for (int i = 0; i < cs.site_count(); ++i) heights[cs.site_name(i)] = config.heights[i];
  return heights;
}

sasm::SubConfiguration to_sub(const HeightMap& region_heights) {
  sasm::SubConfiguration sub;
  sub.region_heights = region_heights;
  return sub;
}

py::object json_to_py(const sasm::Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

sasm::OracleLimits make_limits(std::uint64_t max_states, long max_particles, int jobs) {
  sasm::OracleLimits limits;
  if (max_states > 0) limits.state_cap = max_states;
  if (max_particles > 0) limits.particle_cap = max_particles;
  limits.jobs = jobs;
  return limits;
}

std::vector<py::dict> chain_to_py(const std::vector<sasm::WitnessStep>& chain) {
  std::vector<py::dict> out;
  for (const auto& step : chain) {
    py::list topplings;
    for (const auto& [site, rule_index] : step.topplings) {
      topplings.append(py::make_tuple(site, rule_index));
    }
    py::dict d;
    d["add_at"] = step.add_at;
    d["topplings"] = topplings;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_sasm, m) {
  m.doc() = "Stochastic abelian sandpile models: REDUCE, FSC generation, and an "
            "exhaustive recurrence oracle";

  py::register_exception<sasm::Error>(m, "SasmError");

  py::class_<sasm::SandpileSpec>(m, "SandpileSpec")
      .def_static("from_json", [](const std::string& text) { return sasm::parse_spec(text); })
      .def("to_json", [](const sasm::SandpileSpec& spec) { return sasm::serialize(spec); })
      .def_property_readonly("name", [](const sasm::SandpileSpec& s) { return s.name; })
      .def_property_readonly("sites", [](const sasm::SandpileSpec& s) { return s.sites; })
      .def_property_readonly("capacity",
                             [](const sasm::SandpileSpec& s) { return s.capacity; })
      .def("rules_of", [](const sasm::SandpileSpec& s,
                          const std::string& site) { return s.rules.at(site); })
      .def("__eq__", [](const sasm::SandpileSpec& a,
                        const sasm::SandpileSpec& b) { return a == b; })
      .def("__repr__", [](const sasm::SandpileSpec& s) {
        return "<SandpileSpec " + s.name + " (" + std::to_string(s.sites.size()) +
               " sites)>";
      });

  m.def("validate", [](const sasm::SandpileSpec& spec) {
    return json_to_py(sasm::validate(spec).to_json());
  });

  m.def("grid_ns_ew", &sasm::grid_ns_ew, py::arg("rows"), py::arg("cols"));
  m.def("grid_ne_sw", &sasm::grid_ne_sw, py::arg("rows"), py::arg("cols"));
  m.def("random_spec", &sasm::random_spec, py::arg("site_count"), py::arg("max_capacity"),
        py::arg("max_rules"), py::arg("seed"));
  m.def("grid_site_name", &sasm::grid_site_name, py::arg("row"), py::arg("col"));

  m.def("c_max", [](const sasm::SandpileSpec& spec) {
    const auto cs = sasm::compile(spec);
    return from_config(cs, sasm::c_max(cs));
  });
  m.def("is_stable", [](const sasm::SandpileSpec& spec, const HeightMap& heights) {
    const auto cs = sasm::compile(spec);
    return sasm::is_stable(cs, to_config(cs, heights));
  });
  m.def("unstable_sites", [](const sasm::SandpileSpec& spec, const HeightMap& heights) {
    const auto cs = sasm::compile(spec);
    return sasm::unstable_sites(cs, to_config(cs, heights));
  });
  m.def(
      "topple",
      [](const sasm::SandpileSpec& spec, const HeightMap& heights, const std::string& site,
         int rule_index) {
        const auto cs = sasm::compile(spec);
        auto [next, event] = sasm::topple(cs, to_config(cs, heights), site, rule_index);
        py::dict ev;
        ev["site"] = event.site;
        ev["rule_index"] = event.rule_index;
        ev["sink_loss"] = event.sink_loss;
        return py::make_tuple(from_config(cs, next), ev);
      },
      py::arg("spec"), py::arg("heights"), py::arg("site"), py::arg("rule_index"));
  m.def(
      "stabilize",
      [](const sasm::SandpileSpec& spec, const HeightMap& heights, long step_budget) {
        const auto cs = sasm::compile(spec);
        return from_config(cs,
                           sasm::stabilize(cs, to_config(cs, heights),
                                           sasm::first_site_first_rule(), step_budget));
      },
      py::arg("spec"), py::arg("heights"), py::arg("step_budget") = 0);

  m.def("restrict_spec", &sasm::restrict_spec, py::arg("spec"), py::arg("keep"));
  m.def("reduce", [](const sasm::SandpileSpec& spec) {
    return json_to_py(sasm::reduce(spec).to_json(true));
  });
  m.def("is_irreducible", &sasm::is_irreducible);
  m.def("is_minimal_irreducible", &sasm::is_minimal_irreducible);
  m.def("decide_fsc_exists", [](const sasm::SandpileSpec& spec) -> py::object {
    const auto witness = sasm::decide_fsc_exists(spec);
    if (!witness) return py::none();
    return py::cast(witness->sub_configuration.region_heights);
  });
  m.def("layered_decomposition", &sasm::layered_decomposition, py::arg("spec"),
        py::arg("site"));
  m.def(
      "enumerate_fsc_supports",
      [](const sasm::SandpileSpec& spec, int budget) {
        std::vector<HeightMap> out;
        for (const auto& witness : sasm::enumerate_fsc_supports(spec, budget)) {
          out.push_back(witness.sub_configuration.region_heights);
        }
        return out;
      },
      py::arg("spec"), py::arg("budget"));

  m.def(
      "stabilize_outcomes",
      [](const sasm::SandpileSpec& spec, const HeightMap& heights, std::uint64_t max_states,
         long max_particles, int jobs) {
        const auto cs = sasm::compile(spec);
        const auto result = sasm::stabilize_outcomes(spec, to_config(cs, heights),
                                                     make_limits(max_states, max_particles,
                                                                 jobs));
        std::vector<HeightMap> outcomes;
        for (const auto& c : result.outcomes) outcomes.push_back(from_config(cs, c));
        return py::make_tuple(outcomes, result.cycle_flag);
      },
      py::arg("spec"), py::arg("heights"), py::arg("max_states") = 0,
      py::arg("max_particles") = 0, py::arg("jobs") = 1);

  py::class_<sasm::RecurrentSet>(m, "RecurrentSet")
      .def_property_readonly("spec", &sasm::RecurrentSet::spec)
      .def("members",
           [](const sasm::RecurrentSet& set) {
             std::vector<HeightMap> out;
             for (const auto& member : set.members()) {
               out.push_back(from_config(set.compiled(), member));
             }
             return out;
           })
      .def("__len__", [](const sasm::RecurrentSet& set) { return set.members().size(); })
      .def("contains",
           [](const sasm::RecurrentSet& set, const HeightMap& heights) {
             return set.contains(to_config(set.compiled(), heights));
           })
      .def("witness_chain",
           [](const sasm::RecurrentSet& set, const HeightMap& heights) {
             return chain_to_py(set.witness_chain(to_config(set.compiled(), heights)));
           })
      .def("stats", [](const sasm::RecurrentSet& set) {
        const auto& s = set.stats();
        py::dict d;
        d["stable_total"] = s.stable_total;
        d["member_count"] = s.member_count;
        d["configs_explored"] = s.configs_explored;
        d["transitions"] = s.transitions;
        d["waves"] = s.waves;
        d["cycle_possible"] = s.cycle_possible;
        return d;
      });

  m.def(
      "recurrent_stable_set",
      [](const sasm::SandpileSpec& spec, std::uint64_t max_states, long max_particles,
         int jobs) {
        return sasm::recurrent_stable_set(spec, make_limits(max_states, max_particles, jobs));
      },
      py::arg("spec"), py::arg("max_states") = 0, py::arg("max_particles") = 0,
      py::arg("jobs") = 1);

  m.def(
      "is_recurrent",
      [](const sasm::SandpileSpec& spec, const HeightMap& heights, std::uint64_t max_states,
         long max_particles, int jobs) {
        const auto cs = sasm::compile(spec);
        const auto answer =
            sasm::is_recurrent(spec, to_config(cs, heights),
                               make_limits(max_states, max_particles, jobs));
        return py::make_tuple(answer.recurrent, chain_to_py(answer.chain));
      },
      py::arg("spec"), py::arg("heights"), py::arg("max_states") = 0,
      py::arg("max_particles") = 0, py::arg("jobs") = 1);

  m.def(
      "is_forbidden",
      [](const sasm::SandpileSpec& spec, const HeightMap& region_heights,
         std::uint64_t max_states, long max_particles, int jobs) {
        return sasm::is_forbidden(spec, to_sub(region_heights),
                                  make_limits(max_states, max_particles, jobs));
      },
      py::arg("spec"), py::arg("region_heights"), py::arg("max_states") = 0,
      py::arg("max_particles") = 0, py::arg("jobs") = 1);

  m.def(
      "enumerate_minimal_fscs",
      [](const sasm::SandpileSpec& spec, int max_region) {
        std::vector<HeightMap> out;
        for (const auto& sub : sasm::enumerate_minimal_fscs(spec, max_region)) {
          out.push_back(sub.region_heights);
        }
        return out;
      },
      py::arg("spec"), py::arg("max_region"));

  m.def(
      "minimal_irreducible_subsandpiles",
      [](const sasm::SandpileSpec& spec, const std::optional<std::string>& containing) {
        return sasm::minimal_irreducible_subsandpiles(spec, containing);
      },
      py::arg("spec"), py::arg("containing") = std::nullopt);

  m.def("union_subsandpiles", &sasm::union_subsandpiles, py::arg("spec"),
        py::arg("region_a"), py::arg("region_b"));
  m.def(
      "glue",
      [](const sasm::SandpileSpec& spec, const HeightMap& c1, const HeightMap& c2,
         const std::string& glue_site) {
        return sasm::glue(spec, to_sub(c1), to_sub(c2), glue_site).region_heights;
      },
      py::arg("spec"), py::arg("c1"), py::arg("c2"), py::arg("glue_site"));
  m.def(
      "manna_fsc_chain",
      [](int blocks, int row_offset, int col_offset) {
        return sasm::manna_fsc_chain(blocks, row_offset, col_offset).region_heights;
      },
      py::arg("blocks"), py::arg("row_offset") = 0, py::arg("col_offset") = 0);
  m.def(
      "render_region",
      [](const HeightMap& region_heights) { return sasm::render_region(to_sub(region_heights)); },
      py::arg("region_heights"));
}
