// Command-line surface over the sasm library. Machine-readable JSON goes to
// stdout, diagnostics to stderr. Exit codes: 0 completed (answers are
// payload), 2 invalid input, 1 internal or budget failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "sasm/builders.hpp"
#include "sasm/fscgen.hpp"
#include "sasm/model.hpp"
#include "sasm/oracle.hpp"
#include "sasm/reduce.hpp"

namespace {

using sasm::Json;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw sasm::Error("io-error", "cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

bool is_input_error(const sasm::Error& e) {
  static const std::set<std::string> kInputCodes{
      "parse-error",     "schema-error",        "spec-invalid",
      "unknown-site",    "invalid-dimensions",  "invalid-count",
      "not-stable",      "topple-at-stable-site", "invalid-rule-index",
      "regions-disagree-on-intersection", "glue-site-not-shared",
      "glue-site-not-isolated", "not-minimal-irreducible",
      "not-irreducible-input", "io-error", "not-a-member"};
  return kInputCodes.count(e.code()) != 0;
}

Json witness_chain_json(const std::vector<sasm::WitnessStep>& chain) {
  Json arr = Json::array();
  for (const auto& step : chain) {
    Json topplings = Json::array();
    for (const auto& [site, rule_index] : step.topplings) {
      topplings.push_back(Json{{"site", site}, {"rule_index", rule_index}});
    }
    arr.push_back(Json{{"add_at", step.add_at}, {"topplings", topplings}});
  }
  return arr;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sasm::Error("io-error", "cannot open output file: " + path);
  return out;
}

sasm::OracleLimits limits_from_env() {
  sasm::OracleLimits limits;
  if (const char* cap = std::getenv("SASM_STATE_CAP")) {
    limits.state_cap = std::strtoull(cap, nullptr, 10);
  }
  return limits;
}

struct OracleFlags {
  std::uint64_t max_states = 0;
  long max_particles = 0;
  int jobs = 1;

  sasm::OracleLimits to_limits() const {
    sasm::OracleLimits limits = limits_from_env();
    if (max_states > 0) limits.state_cap = max_states;
    if (max_particles > 0) limits.particle_cap = max_particles;
    limits.jobs = jobs;
    return limits;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-states", max_states, "Stable state-space cap");
    cmd->add_option("--max-particles", max_particles, "Particle total cap");
    cmd->add_option("--jobs", jobs, "Worker threads (output is identical for any value)");
  }
};

int run_validate(const std::string& input) {
  sasm::SandpileSpec spec;
  try {
    spec = sasm::parse_spec(read_input(input));
  } catch (const sasm::ParseError& e) {
    emit(Json{{"ok", false},
              {"errors", Json::array({Json{{"code", e.code()},
                                           {"message", e.what()},
                                           {"byte", e.byte()}}})}});
    return 2;
  } catch (const sasm::SchemaError& e) {
    emit(Json{{"ok", false},
              {"errors", Json::array({Json{{"code", e.code()},
                                           {"message", e.what()},
                                           {"field", e.field()}}})}});
    return 2;
  }
  const auto report = sasm::validate(spec);
  emit(report.to_json());
  return report.clean() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic abelian sandpile models: REDUCE, FSC generation, brute-force "
               "recurrence oracle"};
  app.require_subcommand(1);

  std::string input = "-";
  std::string config_input;
  std::string sub_input;
  bool trace = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check a sandpile document");
  validate_cmd->add_option("spec", input, "Spec JSON file, or - for stdin")->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Run the fixed-point pruning");
  reduce_cmd->add_option("spec", input)->required();
  reduce_cmd->add_flag("--trace", trace, "Include the per-round layers");

  auto* decide_cmd =
      app.add_subcommand("decide-fsc", "Decide forbidden sub-configuration existence");
  decide_cmd->add_option("spec", input)->required();

  auto* gen = app.add_subcommand("gen", "Generate specs and witnesses");
  gen->require_subcommand(1);
  std::string model = "ns-ew";
  int rows = 0, cols = 0;
  auto* gen_grid = gen->add_subcommand("grid", "Grid sandpile");
  gen_grid->add_option("--model", model, "ns-ew or ne-sw")
      ->check(CLI::IsMember({"ns-ew", "ne-sw"}))
      ->required();
  gen_grid->add_option("--rows", rows)->required();
  gen_grid->add_option("--cols", cols)->required();

  int blocks = 0;
  std::string offset = "0,0";
  auto* gen_chain = gen->add_subcommand("manna-fsc", "Diagonal chain of glued block FSCs");
  gen_chain->add_option("--blocks", blocks)->required();
  gen_chain->add_option("--offset", offset, "Row,col offset of the chain");

  int sites = 0, max_capacity = 2, max_rules = 2;
  std::uint64_t seed = 0;
  auto* gen_random = gen->add_subcommand("random", "Seed-deterministic random spec");
  gen_random->add_option("--sites", sites)->required();
  gen_random->add_option("--seed", seed)->required();
  gen_random->add_option("--max-capacity", max_capacity);
  gen_random->add_option("--max-rules", max_rules);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive ground-truth queries");
  oracle->require_subcommand(1);
  OracleFlags oracle_flags;
  std::string witness_path;

  auto* rec_set = oracle->add_subcommand("recurrent-set", "All stable configs reachable "
                                                          "from c_max");
  rec_set->add_option("spec", input)->required();
  oracle_flags.attach(rec_set);
  rec_set->add_option("--witness", witness_path, "Write witness chains (JSON lines)");

  auto* is_rec = oracle->add_subcommand("is-recurrent", "Membership of a stable config");
  is_rec->add_option("spec", input)->required();
  is_rec->add_option("config", config_input)->required();
  oracle_flags.attach(is_rec);
  is_rec->add_option("--witness", witness_path, "Write the witness chain JSON");

  auto* is_forb = oracle->add_subcommand("is-forbidden", "Forbiddenness of a sub-config");
  is_forb->add_option("spec", input)->required();
  is_forb->add_option("subconfig", sub_input)->required();
  oracle_flags.attach(is_forb);

  int max_region = 0;
  auto* min_fscs = oracle->add_subcommand("minimal-fscs", "Minimal forbidden sub-configs");
  min_fscs->add_option("spec", input)->required();
  min_fscs->add_option("--max-region", max_region)->required();
  oracle_flags.attach(min_fscs);

  std::string containing;
  auto* min_irred = oracle->add_subcommand("min-irred", "Minimal irreducible sub-sandpiles");
  min_irred->add_option("spec", input)->required();
  min_irred->add_option("--containing", containing, "Only sets containing this site");
  oracle_flags.attach(min_irred);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(input);

    if (reduce_cmd->parsed()) {
      const auto spec = sasm::parse_spec(read_input(input));
      emit(sasm::reduce(spec).to_json(trace));
      return 0;
    }

    if (decide_cmd->parsed()) {
      const auto spec = sasm::parse_spec(read_input(input));
      const auto witness = sasm::decide_fsc_exists(spec);
      Json j{{"exists", witness.has_value()}};
      if (witness) j["witness"] = sasm::subconfig_to_json(witness->sub_configuration);
      emit(j);
      return 0;
    }

    if (gen_grid->parsed()) {
      const auto spec =
          model == "ns-ew" ? sasm::grid_ns_ew(rows, cols) : sasm::grid_ne_sw(rows, cols);
      std::cout << sasm::serialize(spec);
      return 0;
    }

    if (gen_chain->parsed()) {
      int row_offset = 0, col_offset = 0;
      const auto comma = offset.find(',');
      if (comma == std::string::npos) {
        throw sasm::InvalidCount("--offset expects R,C");
      }
      try {
        row_offset = std::stoi(offset.substr(0, comma));
        col_offset = std::stoi(offset.substr(comma + 1));
      } catch (const std::exception&) {
        throw sasm::InvalidCount("--offset expects R,C integers");
      }
      const auto chain = sasm::manna_fsc_chain(blocks, row_offset, col_offset);
      std::cout << sasm::serialize(chain);
      std::cerr << sasm::render_region(chain);
      return 0;
    }

    if (gen_random->parsed()) {
      std::cout << sasm::serialize(sasm::random_spec(sites, max_capacity, max_rules, seed));
      return 0;
    }

    if (rec_set->parsed()) {
      const auto spec = sasm::parse_spec(read_input(input));
      const auto set = sasm::recurrent_stable_set(spec, oracle_flags.to_limits());
      const auto& stats = set.stats();
      emit(Json{{"members", stats.member_count},
                {"stable", stats.stable_total},
                {"transitions", stats.transitions},
                {"configs_explored", stats.configs_explored},
                {"waves", stats.waves},
                {"cycle_possible", stats.cycle_possible}});
      for (const auto& member : set.members()) {
        std::cout << sasm::serialize(set.compiled(), member);
      }
      if (!witness_path.empty()) {
        auto out = open_output(witness_path);
        for (const auto& member : set.members()) {
          Json line{{"member", sasm::config_to_json(set.compiled(), member)},
                    {"chain", witness_chain_json(set.witness_chain(member))}};
          out << line.dump() << "\n";
        }
      }
      return 0;
    }

    if (is_rec->parsed()) {
      const auto spec = sasm::parse_spec(read_input(input));
      const auto set = sasm::recurrent_stable_set(spec, oracle_flags.to_limits());
      const auto config = sasm::parse_config(set.compiled(), read_input(config_input));
      const auto answer = sasm::is_recurrent(set, config);
      emit(Json{{"recurrent", answer.recurrent}});
      if (!witness_path.empty()) {
        auto out = open_output(witness_path);
        Json j{{"chain", answer.recurrent ? witness_chain_json(answer.chain) : Json()}};
        out << j.dump() << "\n";
      }
      return 0;
    }

    if (is_forb->parsed()) {
      const auto spec = sasm::parse_spec(read_input(input));
      const auto sub = sasm::parse_subconfig(read_input(sub_input));
      emit(Json{{"forbidden", sasm::is_forbidden(spec, sub, oracle_flags.to_limits())}});
      return 0;
    }

    if (min_fscs->parsed()) {
      const auto spec = sasm::parse_spec(read_input(input));
      const auto fscs =
          sasm::enumerate_minimal_fscs(spec, max_region, oracle_flags.to_limits());
      Json items = Json::array();
      for (const auto& sub : fscs) items.push_back(sasm::subconfig_to_json(sub));
      emit(Json{{"count", fscs.size()}, {"minimal_fscs", items}});
      return 0;
    }

    if (min_irred->parsed()) {
      const auto spec = sasm::parse_spec(read_input(input));
      std::optional<std::string> filter;
      if (!containing.empty()) filter = containing;
      const auto sets = sasm::minimal_irreducible_subsandpiles(spec, filter);
      Json items = Json::array();
      for (const auto& site_set : sets) items.push_back(site_set);
      emit(Json{{"count", sets.size()}, {"minimal_irreducible", items}});
      return 0;
    }
  } catch (const sasm::Error& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return is_input_error(e) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
