#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sasm/model.hpp"

namespace sasm {

struct OracleLimits {
  /// Maximum number of stable configurations (product of capacities).
  std::uint64_t state_cap = 1ull << 20;
  /// Maximum particle total handled during exploration; <= 0 selects the
  /// default sum(C) + max(C), which covers single-addition search from c_max.
  long particle_cap = 0;
  /// Worker threads for the breadth-first closure. Results are byte-identical
  /// for every value.
  int jobs = 1;
  /// Throw PotentialNonTermination instead of recording a cycle flag.
  bool strict_termination = false;

  long effective_particle_cap(const CompiledSpec& spec) const;
};

/// Every stable configuration reachable from `config` by toppling alone,
/// under all interleavings of site choice and rule choice. cycle_flag marks
/// that some schedule can revisit a configuration (a non-terminating branch);
/// such branches contribute no outcomes.
struct StabilizationOutcomes {
  std::vector<Configuration> outcomes;  // canonical (lexicographic) order
  bool cycle_flag = false;
};

StabilizationOutcomes stabilize_outcomes(const SandpileSpec& spec, const Configuration& config,
                                         const OracleLimits& limits = {});

/// One hop of a recurrence witness: add a particle, then topple as listed.
struct WitnessStep {
  std::string add_at;
  std::vector<std::pair<std::string, int>> topplings;  // (site, rule_index)
};

/// The set of stable configurations reachable from c_max, with enough
/// predecessor bookkeeping to reproduce a full addition/toppling chain for
/// any member on demand. Immutable and safe to query concurrently.
class RecurrentSet {
 public:
  struct Stats {
    std::uint64_t stable_total = 0;      // product of capacities
    std::uint64_t member_count = 0;
    std::uint64_t configs_explored = 0;  // visited-set insertions
    std::uint64_t transitions = 0;       // toppling edges generated
    int waves = 0;                       // breadth-first addition rounds
    bool cycle_possible = false;
  };

  const SandpileSpec& spec() const;
  const CompiledSpec& compiled() const;
  const std::vector<Configuration>& members() const;  // canonical order
  const Stats& stats() const;

  bool contains(const Configuration& config) const;

  /// Chain of additions and topplings from c_max to `member` (empty for
  /// c_max itself). Throws Error if `member` is not in the set.
  std::vector<WitnessStep> witness_chain(const Configuration& member) const;

  RecurrentSet(RecurrentSet&&) noexcept;
  RecurrentSet& operator=(RecurrentSet&&) noexcept;
  ~RecurrentSet();

 private:
  friend RecurrentSet recurrent_stable_set(const SandpileSpec&, const OracleLimits&);
  struct Impl;
  explicit RecurrentSet(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

RecurrentSet recurrent_stable_set(const SandpileSpec& spec, const OracleLimits& limits = {});

struct RecurrenceAnswer {
  bool recurrent = false;
  std::vector<WitnessStep> chain;  // meaningful only when recurrent
};

/// Membership of a stable configuration in the recurrent set, with a
/// replayable witness chain on success. Throws NotStable for unstable input.
RecurrenceAnswer is_recurrent(const SandpileSpec& spec, const Configuration& config,
                              const OracleLimits& limits = {});
RecurrenceAnswer is_recurrent(const RecurrentSet& set, const Configuration& config);

/// True iff no member of the recurrent set agrees with `sub` pointwise on its
/// region (exact match, not domination).
bool is_forbidden(const SandpileSpec& spec, const SubConfiguration& sub,
                  const OracleLimits& limits = {});
bool is_forbidden(const RecurrentSet& set, const SubConfiguration& sub);

/// All pointwise-minimal forbidden sub-configurations over regions of at most
/// `max_region` sites: forbidden, and every restriction to a proper nonempty
/// sub-region is not forbidden. `check_budget` caps the number of pattern
/// membership checks (BudgetExceeded beyond it).
std::vector<SubConfiguration> enumerate_minimal_fscs(const SandpileSpec& spec, int max_region,
                                                     const OracleLimits& limits = {},
                                                     std::uint64_t check_budget = 50'000'000);
std::vector<SubConfiguration> enumerate_minimal_fscs(const RecurrentSet& set, int max_region,
                                                     std::uint64_t check_budget = 50'000'000);

/// All site sets A (ascending size, then lexicographic) whose restriction is
/// minimal irreducible, optionally filtered to those containing a given site.
/// Exhaustive over subsets; refuses specs larger than `site_budget` sites.
std::vector<std::vector<std::string>> minimal_irreducible_subsandpiles(
    const SandpileSpec& spec, const std::optional<std::string>& containing = std::nullopt,
    int site_budget = 20);

}  // namespace sasm
