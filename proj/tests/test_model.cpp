#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "sasm/builders.hpp"
#include "sasm/model.hpp"

using namespace sasm;

namespace {

SandpileSpec two_site_spec(int cap_a, int cap_b, std::vector<Rule> rules_a,
                           std::vector<Rule> rules_b) {
  SandpileSpec spec;
  spec.name = "pair";
  spec.sites = {"a", "b"};
  spec.capacity = {{"a", cap_a}, {"b", cap_b}};
  spec.rules = {{"a", std::move(rules_a)}, {"b", std::move(rules_b)}};
  canonicalize(spec);
  return spec;
}

Configuration config_of(const CompiledSpec& cs, std::map<std::string, int> heights) {
  Configuration c;
  c.heights.assign(cs.site_count(), 0);
  for (const auto& [site, h] : heights) c.heights[cs.site_index(site)] = h;
  return c;
}

bool has_error(const ValidationReport& report, const std::string& code) {
  return std::any_of(report.errors.begin(), report.errors.end(),
                     [&](const ValidationIssue& issue) { return issue.code == code; });
}

}  // namespace

TEST_CASE("validate accepts the 2x2 NS-EW grid") {
  const auto report = validate(grid_ns_ew(2, 2));
  CHECK(report.clean());
  CHECK(report.warnings.empty());
}

TEST_CASE("validate flags oversized rules") {
  auto spec = two_site_spec(2, 2, {{"b", "b", "b"}}, {{"a"}});
  const auto report = validate(spec);
  CHECK_FALSE(report.clean());
  CHECK(has_error(report, "rule-exceeds-capacity"));
}

TEST_CASE("validate flags unknown sites in rules") {
  auto spec = two_site_spec(2, 2, {{"ghost"}}, {{"a"}});
  CHECK(has_error(validate(spec), "unknown-site-in-rule"));
}

TEST_CASE("validate flags self-delivery, bad capacity, empty rule lists") {
  CHECK(has_error(validate(two_site_spec(2, 2, {{"a"}}, {{"a"}})), "self-delivery"));
  CHECK(has_error(validate(two_site_spec(0, 2, {{"b"}}, {{"a"}})), "capacity-not-positive"));
  CHECK(has_error(validate(two_site_spec(2, 2, {}, {{"a"}})), "empty-rule-list"));
}

TEST_CASE("validate warns about lossless closed rule sets") {
  // a and b can pass two particles back and forth forever.
  auto spec = two_site_spec(2, 2, {{"b", "b"}}, {{"a", "a"}});
  const auto report = validate(spec);
  CHECK(report.clean());
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].code == "potential-nonterminating-branch");

  // Grids have no such set: every chain of lossless rules reaches a corner.
  CHECK(validate(grid_ns_ew(4, 4)).warnings.empty());
  CHECK(validate(grid_ne_sw(3, 3)).warnings.empty());
}

TEST_CASE("compile rejects invalid specs") {
  CHECK_THROWS_AS(compile(two_site_spec(2, 2, {{"ghost"}}, {{"a"}})), SpecInvalid);
}

TEST_CASE("stability is pointwise") {
  const auto cs = compile(grid_ns_ew(2, 2));
  const auto full = c_max(cs);
  CHECK(full.heights == std::vector<int>{1, 1, 1, 1});
  CHECK(is_stable(cs, full));

  auto bumped = full;
  bumped.heights[cs.site_index("r1c1")] = 2;
  CHECK_FALSE(is_stable(cs, bumped));
  CHECK(unstable_sites(cs, bumped) == std::vector<std::string>{"r1c1"});

  const Configuration empty{{0, 0, 0, 0}};
  CHECK(is_stable(cs, empty));
  CHECK(unstable_site_indices(cs, empty).empty());
}

TEST_CASE("topple follows the chosen rule and routes the rest to the sink") {
  const auto cs = compile(grid_ns_ew(2, 2));
  // Canonical rule order at r1c1 is [[r1c2], [r2c1]]: east first, then south.
  const auto start = config_of(cs, {{"r1c1", 2}});
  auto [south, ev_south] = topple(cs, start, "r1c1", 1);
  CHECK(south == config_of(cs, {{"r2c1", 1}}));
  CHECK(ev_south.sink_loss == 1);

  const auto cs3 = compile(grid_ns_ew(3, 3));
  const auto center = config_of(cs3, {{"r2c2", 2}});
  auto [horiz, ev_horiz] = topple(cs3, center, "r2c2", 1);
  CHECK(horiz == config_of(cs3, {{"r2c1", 1}, {"r2c3", 1}}));
  CHECK(ev_horiz.sink_loss == 0);

  const auto nesw = compile(grid_ne_sw(2, 2));
  const auto sw = config_of(nesw, {{"r2c1", 2}});
  auto [zeros, ev_zeros] = topple(nesw, sw, "r2c1", 0);  // clipped {S,W} rule
  CHECK(zeros == config_of(nesw, {}));
  CHECK(ev_zeros.sink_loss == 2);
}

TEST_CASE("topple rejects stable sites and bad rule indices") {
  const auto cs = compile(grid_ns_ew(2, 2));
  const auto start = config_of(cs, {{"r1c1", 2}});
  CHECK_THROWS_AS(topple(cs, start, "r1c2", 0), ToppleAtStableSite);
  CHECK_THROWS_AS(topple(cs, start, "r1c1", 2), InvalidRuleIndex);
  CHECK_THROWS_AS(topple(cs, start, "nope", 0), UnknownSite);
}

TEST_CASE("particle accounting: total drop equals sink loss") {
  const auto specs = {grid_ns_ew(3, 3), grid_ne_sw(3, 2), grid_ns_ew(1, 4)};
  for (const auto& spec : specs) {
    const auto cs = compile(spec);
    for (int v = 0; v < cs.site_count(); ++v) {
      Configuration c;
      c.heights.assign(cs.site_count(), 1);
      c.heights[v] = cs.capacity(v) + 1;
      for (int r = 0; r < static_cast<int>(cs.rules(v).size()); ++r) {
        auto [next, event] = topple(cs, c, v, r);
        CHECK(c.total() - next.total() == event.sink_loss);
        CHECK(event.sink_loss >= 0);
      }
    }
  }
}

TEST_CASE("stabilize: stable input is returned unchanged") {
  const auto cs = compile(grid_ns_ew(2, 2));
  const auto stable = config_of(cs, {{"r1c2", 1}});
  CHECK(stabilize(cs, stable) == stable);
}

TEST_CASE("stabilize with an always-vertical policy") {
  const auto cs = compile(grid_ns_ew(2, 2));
  // Vertical rules sort second at every 2x2 site.
  const TopplePolicy vertical = [](const Configuration&, const std::vector<int>& unstable) {
    return std::pair<int, int>(unstable.front(), 1);
  };
  const auto result = stabilize(cs, config_of(cs, {{"r1c1", 2}}), vertical);
  CHECK(result == config_of(cs, {{"r2c1", 1}}));
}

TEST_CASE("stabilize of a deterministic spec is order-independent") {
  // Single rule per site: any site-selection policy must agree.
  SandpileSpec spec;
  spec.name = "det-chain";
  spec.sites = {"a", "b", "c"};
  spec.capacity = {{"a", 2}, {"b", 2}, {"c", 2}};
  spec.rules = {{"a", {{"b"}}}, {"b", {{"c"}}}, {"c", {{"b"}}}};
  canonicalize(spec);
  const auto cs = compile(spec);
  const TopplePolicy last_site = [](const Configuration&, const std::vector<int>& unstable) {
    return std::pair<int, int>(unstable.back(), 0);
  };
  Configuration heavy{{5, 4, 3}};
  CHECK(stabilize(cs, heavy) == stabilize(cs, heavy, last_site));
}

TEST_CASE("stabilize reports budget exhaustion with trailing configurations") {
  auto spec = two_site_spec(2, 2, {{"b", "b"}}, {{"a", "a"}});
  const auto cs = compile(spec);
  try {
    stabilize(cs, Configuration{{2, 0}}, first_site_first_rule(), 100);
    FAIL("expected StepBudgetExhausted");
  } catch (const StepBudgetExhausted& e) {
    CHECK_FALSE(e.trailing().empty());
  }
}

TEST_CASE("spec serialization is canonical and round-trips") {
  const auto spec = grid_ns_ew(2, 2);
  const auto text = serialize(spec);
  CHECK(serialize(parse_spec(text)) == text);

  // A reordered but equivalent document parses to the same canonical bytes.
  const std::string shuffled = R"({"sites":["r2c2","r1c1","r2c1","r1c2"],
    "name":"ns-ew-2x2",
    "rules":{"r2c2":[["r2c1"],["r1c2"]],"r1c2":[["r2c2"],["r1c1"]],
             "r2c1":[["r2c2"],["r1c1"]],"r1c1":[["r2c1"],["r1c2"]]},
    "capacity":{"r2c2":2,"r2c1":2,"r1c2":2,"r1c1":2}})";
  CHECK(serialize(parse_spec(shuffled)) == text);
}

TEST_CASE("spec serialization matches the golden document") {
  std::ifstream golden(std::string(SASM_FIXTURES_DIR) + "/v1/ns-ew-2x2.json",
                       std::ios::binary);
  REQUIRE(golden.good());
  std::ostringstream buffer;
  buffer << golden.rdbuf();
  CHECK(serialize(grid_ns_ew(2, 2)) == buffer.str());
}

TEST_CASE("parse rejects malformed and incomplete documents") {
  CHECK_THROWS_AS(parse_spec("{\"sites\": ["), ParseError);
  try {
    parse_spec("not json at all");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.byte() > 0);
  }
  // capacity omits r2c2
  const std::string missing = R"({"name":"x","sites":["a","b"],
    "capacity":{"a":2},"rules":{"a":[["b"]],"b":[["a"]]}})";
  CHECK_THROWS_AS(parse_spec(missing), SchemaError);
  const std::string dup = R"({"name":"x","sites":["a","a"],
    "capacity":{"a":2},"rules":{"a":[[]]}})";
  CHECK_THROWS_AS(parse_spec(dup), SchemaError);
}

TEST_CASE("random spec metadata survives the round trip") {
  const auto spec = random_spec(4, 2, 2, 99);
  const auto reparsed = parse_spec(serialize(spec));
  CHECK(reparsed == spec);
  CHECK(reparsed.metadata["generator"]["seed"] == 99);
}

TEST_CASE("configuration documents round-trip against their spec") {
  const auto cs = compile(grid_ns_ew(2, 2));
  const auto config = config_of(cs, {{"r1c1", 1}, {"r2c2", 3}});
  const auto text = serialize(cs, config);
  CHECK(parse_config(cs, text) == config);

  CHECK_THROWS_AS(parse_config(cs, R"({"heights":{"r1c1":1}})"), SchemaError);
  CHECK_THROWS_AS(parse_config(cs, R"({"heights":{"r1c1":1,"r1c2":0,"r2c1":0,"bad":0}})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_config(cs, R"({"heights":{"r1c1":-1,"r1c2":0,"r2c1":0,"r2c2":0}})"),
                  SchemaError);
}

TEST_CASE("sub-configuration documents round-trip") {
  SubConfiguration sub;
  sub.region_heights = {{"r1c1", 0}, {"r2c2", 1}};
  CHECK(parse_subconfig(serialize(sub)) == sub);
  CHECK(sub.region() == std::vector<std::string>{"r1c1", "r2c2"});
  CHECK_THROWS_AS(parse_subconfig(R"({"region_heights":{}})"), SchemaError);
}
