#include "sasm/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace sasm {

namespace {

bool is_sorted_unique(const std::vector<std::string>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) return false;
  }
  return true;
}

}  // namespace

void canonicalize(SandpileSpec& spec) {
  std::sort(spec.sites.begin(), spec.sites.end());
  if (!is_sorted_unique(spec.sites)) {
    throw SchemaError("sites", "duplicate site identifier in site list");
  }
  for (const auto& site : spec.sites) {
    if (site.empty()) throw SchemaError("sites", "empty site identifier");
    if (!spec.capacity.count(site)) {
      throw SchemaError("capacity", "capacity missing for site " + site);
    }
    if (!spec.rules.count(site)) {
      throw SchemaError("rules", "rules missing for site " + site);
    }
  }
  if (spec.capacity.size() != spec.sites.size()) {
    throw SchemaError("capacity", "capacity keyed by a non-site identifier");
  }
  if (spec.rules.size() != spec.sites.size()) {
    throw SchemaError("rules", "rules keyed by a non-site identifier");
  }
  for (auto& [site, rule_list] : spec.rules) {
    for (auto& rule : rule_list) std::sort(rule.begin(), rule.end());
    std::sort(rule_list.begin(), rule_list.end());
    rule_list.erase(std::unique(rule_list.begin(), rule_list.end()), rule_list.end());
  }
}

int Configuration::total() const {
  return std::accumulate(heights.begin(), heights.end(), 0);
}

std::vector<std::string> SubConfiguration::region() const {
  std::vector<std::string> out;
  out.reserve(region_heights.size());
  for (const auto& [site, _] : region_heights) out.push_back(site);
  return out;
}

Json ValidationReport::to_json() const {
  auto issues = [](const std::vector<ValidationIssue>& v) {
    Json arr = Json::array();
    for (const auto& issue : v) {
      Json j{{"code", issue.code}, {"message", issue.message}};
      if (!issue.site.empty()) j["site"] = issue.site;
      if (issue.rule_index >= 0) j["rule_index"] = issue.rule_index;
      arr.push_back(j);
    }
    return arr;
  };
  Json j{{"ok", clean()}};
  if (!errors.empty()) j["errors"] = issues(errors);
  if (!warnings.empty()) j["warnings"] = issues(warnings);
  return j;
}

namespace {

// Greatest fixed point of "every member has a lossless rule delivering only
// inside the set". Any configuration cycle must topple exclusively inside
// such a set, so an empty result rules out non-terminating schedules.
std::vector<std::string> conservative_core_names(const SandpileSpec& spec) {
  std::set<std::string> core(spec.sites.begin(), spec.sites.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& site : spec.sites) {
      if (!core.count(site)) continue;
      auto cap_it = spec.capacity.find(site);
      const int cap = cap_it == spec.capacity.end() ? 0 : cap_it->second;
      bool has_conservative = false;
      for (const auto& rule : spec.rules.at(site)) {
        if (static_cast<int>(rule.size()) != cap) continue;
        bool inside = true;
        for (const auto& target : rule) {
          if (!core.count(target)) {
            inside = false;
            break;
          }
        }
        if (inside) {
          has_conservative = true;
          break;
        }
      }
      if (!has_conservative) {
        core.erase(site);
        changed = true;
      }
    }
  }
  return {core.begin(), core.end()};
}

}  // namespace

ValidationReport validate(const SandpileSpec& spec) {
  ValidationReport report;
  std::set<std::string> known(spec.sites.begin(), spec.sites.end());
  for (const auto& site : spec.sites) {
    const int cap = spec.capacity.at(site);
    if (cap < 1) {
      report.errors.push_back(
          {"capacity-not-positive", "capacity must be at least 1 at site " + site, site, -1});
    }
    const auto& rule_list = spec.rules.at(site);
    if (rule_list.empty()) {
      report.errors.push_back(
          {"empty-rule-list", "site " + site + " has no toppling rules", site, -1});
    }
    for (int r = 0; r < static_cast<int>(rule_list.size()); ++r) {
      const auto& rule = rule_list[r];
      if (static_cast<int>(rule.size()) > cap) {
        report.errors.push_back({"rule-exceeds-capacity",
                                 "rule exceeds capacity at site " + site, site, r});
      }
      for (const auto& target : rule) {
        if (!known.count(target)) {
          report.errors.push_back(
              {"unknown-site-in-rule",
               "unknown site " + target + " in rule of site " + site, site, r});
        } else if (target == site) {
          report.errors.push_back(
              {"self-delivery", "rule of site " + site + " delivers to itself", site, r});
        }
      }
    }
  }
  const auto core = conservative_core_names(spec);
  if (!core.empty()) {
    std::string joined;
    for (const auto& s : core) joined += (joined.empty() ? "" : ",") + s;
    report.warnings.push_back(
        {"potential-nonterminating-branch",
         "sites {" + joined +
             "} each own a lossless rule delivering only inside the set; some toppling "
             "schedule may never terminate",
         "", -1});
  }
  return report;
}

CompiledSpec::CompiledSpec(SandpileSpec spec) : spec_(std::move(spec)) {
  canonicalize(spec_);
  auto report = validate(spec_);
  if (!report.clean()) {
    throw SpecInvalid("spec has " + std::to_string(report.errors.size()) +
                      " validation error(s); first: " + report.errors.front().message);
  }
  site_names_ = spec_.sites;
  for (int i = 0; i < static_cast<int>(site_names_.size()); ++i) index_[site_names_[i]] = i;
  capacity_.reserve(site_names_.size());
  rules_.reserve(site_names_.size());
  for (const auto& site : site_names_) {
    capacity_.push_back(spec_.capacity.at(site));
    std::vector<std::vector<int>> compiled_rules;
    for (const auto& rule : spec_.rules.at(site)) {
      std::vector<int> targets;
      targets.reserve(rule.size());
      for (const auto& name : rule) targets.push_back(index_.at(name));
      compiled_rules.push_back(std::move(targets));
    }
    rules_.push_back(std::move(compiled_rules));
  }
  for (const auto& name : conservative_core_names(spec_)) {
    conservative_core_.push_back(index_.at(name));
  }
}

int CompiledSpec::site_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw UnknownSite(name);
  return it->second;
}

CompiledSpec compile(const SandpileSpec& spec) { return CompiledSpec(spec); }

Configuration c_max(const CompiledSpec& spec) {
  Configuration c;
  c.heights.reserve(spec.site_count());
  for (int i = 0; i < spec.site_count(); ++i) c.heights.push_back(spec.capacity(i) - 1);
  return c;
}

namespace {

void check_paired(const CompiledSpec& spec, const Configuration& config) {
  if (static_cast<int>(config.heights.size()) != spec.site_count()) {
    throw SchemaError("heights", "configuration has " +
                                     std::to_string(config.heights.size()) +
                                     " heights for a spec with " +
                                     std::to_string(spec.site_count()) + " sites");
  }
}

}  // namespace

bool is_stable(const CompiledSpec& spec, const Configuration& config) {
  check_paired(spec, config);
  for (int i = 0; i < spec.site_count(); ++i) {
    if (config.heights[i] >= spec.capacity(i)) return false;
  }
  return true;
}

std::vector<int> unstable_site_indices(const CompiledSpec& spec, const Configuration& config) {
  check_paired(spec, config);
  std::vector<int> out;
  for (int i = 0; i < spec.site_count(); ++i) {
    if (config.heights[i] >= spec.capacity(i)) out.push_back(i);
  }
  return out;
}

std::vector<std::string> unstable_sites(const CompiledSpec& spec, const Configuration& config) {
  std::vector<std::string> out;
  for (int i : unstable_site_indices(spec, config)) out.push_back(spec.site_name(i));
  return out;
}

std::pair<Configuration, ToppleEvent> topple(const CompiledSpec& spec,
                                             const Configuration& config, int site,
                                             int rule_index) {
  check_paired(spec, config);
  if (site < 0 || site >= spec.site_count()) {
    throw UnknownSite("#" + std::to_string(site));
  }
  if (config.heights[site] < spec.capacity(site)) {
    throw ToppleAtStableSite(spec.site_name(site));
  }
  const auto& rule_list = spec.rules(site);
  if (rule_index < 0 || rule_index >= static_cast<int>(rule_list.size())) {
    throw InvalidRuleIndex(spec.site_name(site), rule_index);
  }
  Configuration next = config;
  next.heights[site] -= spec.capacity(site);
  for (int target : rule_list[rule_index]) next.heights[target] += 1;
  ToppleEvent event{spec.site_name(site), rule_index, spec.sink_loss(site, rule_index)};
  return {std::move(next), event};
}

std::pair<Configuration, ToppleEvent> topple(const CompiledSpec& spec,
                                             const Configuration& config,
                                             const std::string& site, int rule_index) {
  return topple(spec, config, spec.site_index(site), rule_index);
}

TopplePolicy first_site_first_rule() {
  return [](const Configuration&, const std::vector<int>& unstable) {
    return std::pair<int, int>(unstable.front(), 0);
  };
}

Configuration stabilize(const CompiledSpec& spec, const Configuration& config,
                        const TopplePolicy& policy, long step_budget) {
  check_paired(spec, config);
  if (step_budget <= 0) step_budget = 10000L * std::max(1, spec.site_count());
  Configuration current = config;
  std::vector<std::vector<int>> trailing;
  for (long step = 0; step < step_budget; ++step) {
    auto unstable = unstable_site_indices(spec, current);
    if (unstable.empty()) return current;
    auto [site, rule_index] = policy(current, unstable);
    current = topple(spec, current, site, rule_index).first;
    if (step_budget - step <= 16) trailing.push_back(current.heights);
  }
  if (!unstable_site_indices(spec, current).empty()) {
    throw StepBudgetExhausted(step_budget, std::move(trailing));
  }
  return current;
}

// ---------------------------------------------------------------------------
// JSON I/O

namespace {

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
}

int require_int(const Json& j, const std::string& field, int min_value) {
  if (!j.is_number_integer()) {
    throw SchemaError(field, field + " must be an integer");
  }
  const auto v = j.get<std::int64_t>();
  if (v < min_value || v > 1'000'000'000) {
    throw SchemaError(field, field + " out of range: " + std::to_string(v));
  }
  return static_cast<int>(v);
}

}  // namespace

SandpileSpec parse_spec(const std::string& text) {
  const Json doc = parse_text(text);
  if (!doc.is_object()) throw SchemaError("", "spec document must be a JSON object");
  SandpileSpec spec;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw SchemaError("name", "name must be a string");
    spec.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("sites") || !doc["sites"].is_array()) {
    throw SchemaError("sites", "sites must be an array of site identifiers");
  }
  for (const auto& s : doc["sites"]) {
    if (!s.is_string()) throw SchemaError("sites", "site identifiers must be strings");
    spec.sites.push_back(s.get<std::string>());
  }
  if (!doc.contains("capacity") || !doc["capacity"].is_object()) {
    throw SchemaError("capacity", "capacity must be an object keyed by site");
  }
  for (const auto& [site, value] : doc["capacity"].items()) {
    // Nonpositive capacities parse fine; validate() reports them.
    spec.capacity[site] = require_int(value, "capacity." + site, -1'000'000'000);
  }
  if (!doc.contains("rules") || !doc["rules"].is_object()) {
    throw SchemaError("rules", "rules must be an object keyed by site");
  }
  for (const auto& [site, rule_list] : doc["rules"].items()) {
    if (!rule_list.is_array()) {
      throw SchemaError("rules." + site, "rule list must be an array of arrays");
    }
    std::vector<Rule> rules;
    for (const auto& rule : rule_list) {
      if (!rule.is_array()) {
        throw SchemaError("rules." + site, "each rule must be an array of site names");
      }
      Rule targets;
      for (const auto& t : rule) {
        if (!t.is_string()) {
          throw SchemaError("rules." + site, "rule entries must be site names");
        }
        targets.push_back(t.get<std::string>());
      }
      rules.push_back(std::move(targets));
    }
    spec.rules[site] = std::move(rules);
  }
  if (doc.contains("metadata")) spec.metadata = doc["metadata"];
  canonicalize(spec);
  return spec;
}

std::string serialize(const SandpileSpec& spec) {
  SandpileSpec canonical = spec;
  canonicalize(canonical);
  Json j;
  j["name"] = canonical.name;
  j["sites"] = canonical.sites;
  Json caps = Json::object();
  for (const auto& [site, cap] : canonical.capacity) caps[site] = cap;
  j["capacity"] = caps;
  Json rules = Json::object();
  for (const auto& [site, rule_list] : canonical.rules) {
    Json arr = Json::array();
    for (const auto& rule : rule_list) arr.push_back(rule);
    rules[site] = arr;
  }
  j["rules"] = rules;
  if (!canonical.metadata.is_null()) j["metadata"] = canonical.metadata;
  return j.dump() + "\n";
}

Configuration parse_config(const CompiledSpec& spec, const std::string& text) {
  const Json doc = parse_text(text);
  if (!doc.is_object() || !doc.contains("heights") || !doc["heights"].is_object()) {
    throw SchemaError("heights", "configuration document must be {\"heights\": {site: int}}");
  }
  const auto& heights = doc["heights"];
  if (heights.size() != static_cast<std::size_t>(spec.site_count())) {
    throw SchemaError("heights", "heights must cover exactly the spec's sites");
  }
  Configuration config;
  config.heights.resize(spec.site_count());
  for (const auto& [site, value] : heights.items()) {
    int index;
    try {
      index = spec.site_index(site);
    } catch (const UnknownSite&) {
      throw SchemaError("heights", "heights names unknown site " + site);
    }
    config.heights[index] = require_int(value, "heights." + site, 0);
  }
  return config;
}

Json config_to_json(const CompiledSpec& spec, const Configuration& config) {
  Json heights = Json::object();
  for (int i = 0; i < spec.site_count(); ++i) heights[spec.site_name(i)] = config.heights[i];
  return Json{{"heights", heights}};
}

std::string serialize(const CompiledSpec& spec, const Configuration& config) {
  if (static_cast<int>(config.heights.size()) != spec.site_count()) {
    throw SchemaError("heights", "configuration does not match spec site count");
  }
  return config_to_json(spec, config).dump() + "\n";
}

SubConfiguration parse_subconfig(const std::string& text) {
  const Json doc = parse_text(text);
  if (!doc.is_object() || !doc.contains("region_heights") ||
      !doc["region_heights"].is_object()) {
    throw SchemaError("region_heights",
                      "sub-configuration document must be {\"region_heights\": {site: int}}");
  }
  SubConfiguration sub;
  for (const auto& [site, value] : doc["region_heights"].items()) {
    sub.region_heights[site] = require_int(value, "region_heights." + site, 0);
  }
  if (sub.region_heights.empty()) {
    throw SchemaError("region_heights", "region must be nonempty");
  }
  return sub;
}

Json subconfig_to_json(const SubConfiguration& sub) {
  Json heights = Json::object();
  for (const auto& [site, h] : sub.region_heights) heights[site] = h;
  return Json{{"region_heights", heights}};
}

std::string serialize(const SubConfiguration& sub) {
  return subconfig_to_json(sub).dump() + "\n";
}

}  // namespace sasm
