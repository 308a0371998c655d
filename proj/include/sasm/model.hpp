#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sasm/errors.hpp"

namespace sasm {

using Json = nlohmann::json;

/// A toppling rule: the multiset of sites that receive one particle each when
/// the owning site topples. Kept sorted; duplicates mean multiple particles.
/// The C(v) - |t| particles not delivered here go to the implicit sink.
using Rule = std::vector<std::string>;

/// A stochastic sandpile: per-site capacities and per-site lists of toppling
/// rules over named sites. The underlying multigraph and the sink edges are
/// implicit in the rules. Values are kept in canonical form: sites sorted,
/// each rule sorted as a multiset, each rule list sorted and deduplicated.
struct SandpileSpec {
  std::string name;
  std::vector<std::string> sites;
  std::map<std::string, int> capacity;
  std::map<std::string, std::vector<Rule>> rules;
  Json metadata;  // null unless the producer attached generator info

  bool operator==(const SandpileSpec&) const = default;
};

/// Sorts sites/rules into canonical form and checks structural sanity
/// (capacity and rules keyed exactly by the site set). Semantic invariants
/// (capacities, rule sizes, unknown targets) are left to validate().
void canonicalize(SandpileSpec& spec);

/// Heights indexed by the spec's canonical site order.
struct Configuration {
  std::vector<int> heights;

  bool operator==(const Configuration&) const = default;
  int total() const;
};

/// A height assignment on a subset of sites, keyed by site name.
struct SubConfiguration {
  std::map<std::string, int> region_heights;

  bool operator==(const SubConfiguration&) const = default;
  std::vector<std::string> region() const;
};

struct ToppleEvent {
  std::string site;
  int rule_index = 0;
  int sink_loss = 0;
};

struct ValidationIssue {
  std::string code;
  std::string message;
  std::string site;     // empty when not site-specific
  int rule_index = -1;  // -1 when not rule-specific
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool clean() const { return errors.empty(); }
  Json to_json() const;
};

ValidationReport validate(const SandpileSpec& spec);

/// Index-resolved form of a valid spec used by all algorithm code. Rule
/// targets are site indices into the canonical site order. Construction
/// fails with SpecInvalid when validate() reports errors.
class CompiledSpec {
 public:
  explicit CompiledSpec(SandpileSpec spec);

  const SandpileSpec& spec() const { return spec_; }
  int site_count() const { return static_cast<int>(site_names_.size()); }
  const std::vector<std::string>& site_names() const { return site_names_; }
  const std::string& site_name(int i) const { return site_names_[i]; }
  int site_index(const std::string& name) const;  // throws UnknownSite
  int capacity(int i) const { return capacity_[i]; }
  const std::vector<std::vector<int>>& rules(int i) const { return rules_[i]; }
  int sink_loss(int site, int rule) const {
    return capacity_[site] - static_cast<int>(rules_[site][rule].size());
  }
  /// True iff some rule of some site is lossless and delivers only inside a
  /// set that itself has this property (greatest fixed point). When empty,
  /// every infinite toppling schedule is impossible.
  const std::vector<int>& conservative_core() const { return conservative_core_; }

 private:
  SandpileSpec spec_;
  std::vector<std::string> site_names_;
  std::map<std::string, int> index_;
  std::vector<int> capacity_;
  std::vector<std::vector<std::vector<int>>> rules_;  // site -> rule -> sorted target indices
  std::vector<int> conservative_core_;
};

CompiledSpec compile(const SandpileSpec& spec);

Configuration c_max(const CompiledSpec& spec);

bool is_stable(const CompiledSpec& spec, const Configuration& config);

/// Indices of sites with c(v) >= C(v), ascending (canonical site order).
std::vector<int> unstable_site_indices(const CompiledSpec& spec, const Configuration& config);
std::vector<std::string> unstable_sites(const CompiledSpec& spec, const Configuration& config);

std::pair<Configuration, ToppleEvent> topple(const CompiledSpec& spec,
                                             const Configuration& config,
                                             const std::string& site, int rule_index);
std::pair<Configuration, ToppleEvent> topple(const CompiledSpec& spec,
                                             const Configuration& config, int site,
                                             int rule_index);

/// Deterministic choice of the next toppling: given the configuration and the
/// unstable site indices (ascending), returns (site index, rule index).
using TopplePolicy =
    std::function<std::pair<int, int>(const Configuration&, const std::vector<int>&)>;

/// Always picks the smallest unstable site and its first rule.
TopplePolicy first_site_first_rule();

/// Applies `policy` until stable. step_budget <= 0 selects the default of
/// 10000 * |sites|; exhausting it throws StepBudgetExhausted with the trailing
/// configurations attached for diagnosis.
Configuration stabilize(const CompiledSpec& spec, const Configuration& config,
                        const TopplePolicy& policy = first_site_first_rule(),
                        long step_budget = 0);

// Canonical JSON I/O. Serialization output is byte-deterministic: object keys
// sorted, site lists sorted, rule lists in canonical multiset order, one
// trailing newline.
SandpileSpec parse_spec(const std::string& text);
std::string serialize(const SandpileSpec& spec);

Configuration parse_config(const CompiledSpec& spec, const std::string& text);
std::string serialize(const CompiledSpec& spec, const Configuration& config);
Json config_to_json(const CompiledSpec& spec, const Configuration& config);

SubConfiguration parse_subconfig(const std::string& text);
std::string serialize(const SubConfiguration& sub);
Json subconfig_to_json(const SubConfiguration& sub);

}  // namespace sasm
