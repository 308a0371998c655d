#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sasm/model.hpp"

namespace sasm {

/// Result of the fixed-point pruning. Layer i holds the sites removed in
/// round i of the canonical simultaneous schedule: each of them has a rule
/// whose support lies entirely in earlier layers. The residual sandpile is
/// irreducible; the all-zero configuration on it cannot be reached.
struct ReduceTrace {
  std::vector<std::vector<std::string>> layers;
  std::vector<std::string> flushed;   // union of layers, sorted
  std::vector<std::string> residual;  // sites never removed, sorted
  SandpileSpec reduced_spec;

  Json to_json(bool include_layers) const;
};

/// Zero heights on a residual site set; certified transient by construction.
struct FscWitness {
  SubConfiguration sub_configuration;

  bool operator==(const FscWitness&) const = default;
};

/// Restriction of the spec to `keep`: capacities restricted, every rule
/// replaced by its multiset intersection with `keep`, equal rules merged.
SandpileSpec restrict_spec(const SandpileSpec& spec, const std::vector<std::string>& keep);

ReduceTrace reduce(const SandpileSpec& spec);

/// Same fixed point computed under an arbitrary schedule: each step removes a
/// pseudo-randomly chosen nonempty subset of the currently removable sites.
/// The flushed set and residual are schedule-independent; layers are not
/// reported since they only make sense for the canonical schedule.
ReduceTrace reduce_with_schedule(const SandpileSpec& spec, std::uint64_t schedule_seed);

bool is_irreducible(const SandpileSpec& spec);

/// Irreducible, and deleting any single site lets the pruning flush
/// everything. Costs |V| + 1 reduce() runs.
bool is_minimal_irreducible(const SandpileSpec& spec);

/// Nonempty residual yields the all-zero witness on it; empty residual means
/// every configuration is recurrent and no forbidden sub-configuration exists.
std::optional<FscWitness> decide_fsc_exists(const SandpileSpec& spec);

/// Layers of reduce(spec restricted to sites - {v}); requires that this
/// flushes everything (throws NotMinimalIrreducible otherwise).
std::vector<std::vector<std::string>> layered_decomposition(const SandpileSpec& spec,
                                                            const std::string& site);

/// Breadth-first search over single-site deletions of residuals, up to
/// `budget` reduce() runs; returns distinct all-zero witnesses sorted by
/// region size, then lexicographically.
std::vector<FscWitness> enumerate_fsc_supports(const SandpileSpec& spec, int budget);

}  // namespace sasm
