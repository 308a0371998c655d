#include "sasm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <deque>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace sasm {

long OracleLimits::effective_particle_cap(const CompiledSpec& spec) const {
  if (particle_cap > 0) return particle_cap;
  long sum = 0;
  int max_cap = 1;
  for (int i = 0; i < spec.site_count(); ++i) {
    sum += spec.capacity(i);
    max_cap = std::max(max_cap, spec.capacity(i));
  }
  return sum + max_cap;
}

namespace {

using u128 = unsigned __int128;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct U128Hash {
  std::size_t operator()(u128 k) const {
    return mix64(static_cast<std::uint64_t>(k) ^
                 mix64(static_cast<std::uint64_t>(k >> 64)));
  }
};

// Fixed-width bit packing of height vectors, site 0 in the most significant
// field so that numeric key order equals lexicographic height order. Fields
// never interact: every height is bounded by the particle cap, which fits a
// field with the all-ones pattern left unused (reserved as hash sentinel).
struct Codec {
  int sites = 0;
  int bits = 0;

  Codec() = default;
  Codec(const CompiledSpec& spec, long particle_cap) : sites(spec.site_count()) {
    bits = 1;
    while ((1ll << bits) - 2 < particle_cap) ++bits;
    if (sites * bits > 128) {
      throw StateCapExceeded("configuration packing needs " + std::to_string(sites * bits) +
                             " bits (> 128); reduce the particle cap or the site count");
    }
  }

  int shift(int site) const { return (sites - 1 - site) * bits; }

  u128 encode(const std::vector<int>& heights) const {
    u128 key = 0;
    for (int i = 0; i < sites; ++i) key |= static_cast<u128>(heights[i]) << shift(i);
    return key;
  }

  void decode(u128 key, std::vector<int>& heights) const {
    const u128 mask = (static_cast<u128>(1) << bits) - 1;
    heights.resize(sites);
    for (int i = 0; i < sites; ++i) {
      heights[i] = static_cast<int>((key >> shift(i)) & mask);
    }
  }
};

// Open-addressing hash set of packed configurations; the all-ones key is the
// empty-slot sentinel and is unreachable for any in-cap configuration.
class KeySet {
 public:
  KeySet() { reset(1 << 12); }

  bool insert(u128 key) {
    std::size_t i = U128Hash{}(key)&mask_;
    while (slots_[i] != kEmpty) {
      if (slots_[i] == key) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = key;
    if (++size_ * 10 > slots_.size() * 7) grow();
    return true;
  }

  bool contains(u128 key) const {
    std::size_t i = U128Hash{}(key)&mask_;
    while (slots_[i] != kEmpty) {
      if (slots_[i] == key) return true;
      i = (i + 1) & mask_;
    }
    return false;
  }

  std::size_t size() const { return size_; }

 private:
  static constexpr u128 kEmpty = ~static_cast<u128>(0);

  void reset(std::size_t capacity) {
    slots_.assign(capacity, kEmpty);
    mask_ = capacity - 1;
    size_ = 0;
  }

  void grow() {
    std::vector<u128> old;
    old.swap(slots_);
    slots_.assign(old.size() * 2, kEmpty);
    mask_ = slots_.size() - 1;
    for (u128 key : old) {
      if (key == kEmpty) continue;
      std::size_t i = U128Hash{}(key)&mask_;
      while (slots_[i] != kEmpty) i = (i + 1) & mask_;
      slots_[i] = key;
    }
  }

  std::vector<u128> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

struct ExploreStats {
  std::uint64_t explored = 0;
  std::uint64_t transitions = 0;
};

// Exhaustive closure of the toppling relation (all unstable-site choices x
// all rule choices) from one start configuration. Every stable configuration
// first reached through this engine's `visited` set is reported exactly once.
class ClosureEngine {
 public:
  ClosureEngine(const CompiledSpec& cs, const Codec& codec, int jobs)
      : cs_(cs), codec_(codec), jobs_(std::max(1, jobs)) {
    // Precomputed toppling deltas; two's-complement wrap-around makes
    // key + delta valid whenever the toppled site is actually unstable.
    deltas_.resize(cs.site_count());
    for (int v = 0; v < cs.site_count(); ++v) {
      for (const auto& rule : cs.rules(v)) {
        u128 delta = -(static_cast<u128>(cs.capacity(v)) << codec_.shift(v));
        for (int target : rule) delta += static_cast<u128>(1) << codec_.shift(target);
        deltas_[v].push_back(delta);
      }
    }
    use_dfs_ = !cs.conservative_core().empty();
  }

  bool cycle_seen() const { return cycle_seen_; }
  KeySet& visited() { return visited_; }
  const ExploreStats& stats() const { return stats_; }

  template <typename OnStable>
  void run(u128 start, OnStable&& on_stable) {
    if (!visited_.insert(start)) return;
    ++stats_.explored;
    codec_.decode(start, scratch_);
    if (stable(scratch_)) {
      on_stable(start);
      return;
    }
    if (use_dfs_) {
      run_dfs(start, on_stable);
    } else {
      run_bfs(start, on_stable);
    }
  }

 private:
  bool stable(const std::vector<int>& heights) const {
    for (int v = 0; v < cs_.site_count(); ++v) {
      if (heights[v] >= cs_.capacity(v)) return false;
    }
    return true;
  }

  // Children of an unstable configuration, paired with their stability.
  void children_of(u128 key, const std::vector<int>& heights,
                   std::vector<std::pair<u128, bool>>& out) const {
    out.clear();
    std::vector<int> child;
    for (int v = 0; v < cs_.site_count(); ++v) {
      if (heights[v] < cs_.capacity(v)) continue;
      for (std::size_t r = 0; r < deltas_[v].size(); ++r) {
        const u128 child_key = key + deltas_[v][r];
        codec_.decode(child_key, child);
        out.emplace_back(child_key, stable(child));
      }
    }
  }

  template <typename OnStable>
  void run_bfs(u128 start, OnStable&& on_stable) {
    std::vector<u128> level{start};
    std::vector<std::pair<u128, bool>> generated;
    std::vector<int> heights;
    std::vector<std::pair<u128, bool>> buffer;
    while (!level.empty()) {
      generated.clear();
      if (jobs_ > 1 && level.size() >= 4096) {
        expand_parallel(level, generated);
      } else {
        for (u128 key : level) {
          codec_.decode(key, heights);
          children_of(key, heights, buffer);
          generated.insert(generated.end(), buffer.begin(), buffer.end());
        }
      }
      stats_.transitions += generated.size();
      std::vector<u128> next;
      for (const auto& [child, child_stable] : generated) {
        if (!visited_.insert(child)) continue;
        ++stats_.explored;
        if (child_stable) {
          on_stable(child);
        } else {
          next.push_back(child);
        }
      }
      level.swap(next);
    }
  }

  // Children are generated in parallel but merged in deterministic slice
  // order, so the visited set evolves identically for every job count.
  void expand_parallel(const std::vector<u128>& level,
                       std::vector<std::pair<u128, bool>>& out) {
    const int workers = jobs_;
    std::vector<std::vector<std::pair<u128, bool>>> slices(workers);
    std::vector<std::thread> threads;
    const std::size_t chunk = (level.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(level.size(), begin + chunk);
        std::vector<int> heights;
        std::vector<std::pair<u128, bool>> buffer;
        for (std::size_t i = begin; i < end; ++i) {
          codec_.decode(level[i], heights);
          children_of(level[i], heights, buffer);
          slices[w].insert(slices[w].end(), buffer.begin(), buffer.end());
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& slice : slices) out.insert(out.end(), slice.begin(), slice.end());
  }

  // Iterative tricolor depth-first search; a child found on the current path
  // is a revisit with no net sink loss, i.e. a non-terminating branch.
  template <typename OnStable>
  void run_dfs(u128 start, OnStable&& on_stable) {
    struct Frame {
      u128 key;
      std::vector<std::pair<u128, bool>> children;
      std::size_t next = 0;
    };
    std::vector<Frame> stack;
    std::unordered_set<u128, U128Hash> gray;
    std::vector<int> heights;

    auto push = [&](u128 key) {
      Frame frame;
      frame.key = key;
      codec_.decode(key, heights);
      children_of(key, heights, frame.children);
      stats_.transitions += frame.children.size();
      gray.insert(key);
      stack.push_back(std::move(frame));
    };

    push(start);
    while (!stack.empty()) {
      Frame& frame = stack.back();
      if (frame.next == frame.children.size()) {
        gray.erase(frame.key);
        stack.pop_back();
        continue;
      }
      const auto [child, child_stable] = frame.children[frame.next++];
      if (gray.count(child)) {
        cycle_seen_ = true;
        continue;
      }
      if (!visited_.insert(child)) continue;
      ++stats_.explored;
      if (child_stable) {
        on_stable(child);
      } else {
        push(child);
      }
    }
  }

  const CompiledSpec& cs_;
  Codec codec_;
  int jobs_;
  bool use_dfs_ = false;
  bool cycle_seen_ = false;
  KeySet visited_;
  ExploreStats stats_;
  std::vector<std::vector<u128>> deltas_;
  std::vector<int> scratch_;
};

long config_total(const std::vector<int>& heights) {
  long total = 0;
  for (int h : heights) total += h;
  return total;
}

std::uint64_t stable_state_count(const CompiledSpec& cs, std::uint64_t cap) {
  std::uint64_t product = 1;
  for (int v = 0; v < cs.site_count(); ++v) {
    const auto c = static_cast<std::uint64_t>(cs.capacity(v));
    if (product > cap / c + 1) {
      throw StateCapExceeded("stable state space exceeds the cap of " + std::to_string(cap));
    }
    product *= c;
  }
  if (product > cap) {
    throw StateCapExceeded("stable state space of " + std::to_string(product) +
                           " exceeds the cap of " + std::to_string(cap));
  }
  return product;
}

}  // namespace

StabilizationOutcomes stabilize_outcomes(const SandpileSpec& spec, const Configuration& config,
                                         const OracleLimits& limits) {
  const CompiledSpec cs = compile(spec);
  const long cap = limits.effective_particle_cap(cs);
  if (config.total() > cap) {
    throw ParticleCapExceeded("configuration has " + std::to_string(config.total()) +
                              " particles, cap is " + std::to_string(cap));
  }
  const Codec codec(cs, cap);
  ClosureEngine engine(cs, codec, limits.jobs);
  std::vector<u128> stable_keys;
  engine.run(codec.encode(config.heights), [&](u128 key) { stable_keys.push_back(key); });
  if (engine.cycle_seen() && limits.strict_termination) {
    throw PotentialNonTermination("a toppling schedule revisits a configuration");
  }
  std::sort(stable_keys.begin(), stable_keys.end());
  StabilizationOutcomes result;
  result.cycle_flag = engine.cycle_seen();
  result.outcomes.reserve(stable_keys.size());
  for (u128 key : stable_keys) {
    Configuration c;
    codec.decode(key, c.heights);
    result.outcomes.push_back(std::move(c));
  }
  return result;
}

struct RecurrentSet::Impl {
  CompiledSpec cs;
  Codec codec;
  Stats stats;
  std::vector<Configuration> members;

  struct WitnessRec {
    u128 pred = 0;
    int add_site = -1;  // -1 marks c_max
    int wave = 0;
  };
  std::unordered_map<u128, WitnessRec, U128Hash> witness;
  std::unordered_map<u128, int, U128Hash> member_index;

  explicit Impl(CompiledSpec compiled) : cs(std::move(compiled)) {}

  bool key_of(const Configuration& config, u128& out) const {
    if (static_cast<int>(config.heights.size()) != cs.site_count()) {
      throw SchemaError("heights", "configuration does not match spec site count");
    }
    for (int v = 0; v < cs.site_count(); ++v) {
      if (config.heights[v] < 0) return false;
      if (config.heights[v] >= cs.capacity(v)) return false;  // unstable, never a member
    }
    out = codec.encode(config.heights);
    return true;
  }

  // Deterministic shortest toppling path from `from` to stable `target`:
  // breadth-first, children in (site, rule) order, first hit wins.
  std::vector<std::pair<std::string, int>> toppling_path(u128 from, u128 target) const {
    if (from == target) return {};
    struct Edge {
      u128 parent;
      int site;
      int rule;
    };
    std::unordered_map<u128, Edge, U128Hash> parent;
    std::deque<u128> queue{from};
    parent[from] = {from, -1, -1};
    std::vector<int> heights;
    while (!queue.empty()) {
      const u128 key = queue.front();
      queue.pop_front();
      codec.decode(key, heights);
      for (int v = 0; v < cs.site_count(); ++v) {
        if (heights[v] < cs.capacity(v)) continue;
        for (std::size_t r = 0; r < cs.rules(v).size(); ++r) {
          u128 child = key - (static_cast<u128>(cs.capacity(v)) << codec.shift(v));
          for (int t : cs.rules(v)[r]) child += static_cast<u128>(1) << codec.shift(t);
          if (parent.count(child)) continue;
          parent[child] = {key, v, static_cast<int>(r)};
          if (child == target) {
            std::vector<std::pair<std::string, int>> path;
            for (u128 at = child; at != from;) {
              const Edge& e = parent.at(at);
              path.emplace_back(cs.site_name(e.site), e.rule);
              at = e.parent;
            }
            std::reverse(path.begin(), path.end());
            return path;
          }
          queue.push_back(child);
        }
      }
    }
    throw Error("witness-reconstruction",
                "internal error: recorded witness target unreachable");
  }
};

RecurrentSet::RecurrentSet(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
RecurrentSet::RecurrentSet(RecurrentSet&&) noexcept = default;
RecurrentSet& RecurrentSet::operator=(RecurrentSet&&) noexcept = default;
RecurrentSet::~RecurrentSet() = default;

const SandpileSpec& RecurrentSet::spec() const { return impl_->cs.spec(); }
const CompiledSpec& RecurrentSet::compiled() const { return impl_->cs; }
const std::vector<Configuration>& RecurrentSet::members() const { return impl_->members; }
const RecurrentSet::Stats& RecurrentSet::stats() const { return impl_->stats; }

bool RecurrentSet::contains(const Configuration& config) const {
  u128 key;
  if (!impl_->key_of(config, key)) return false;
  return impl_->member_index.count(key) != 0;
}

std::vector<WitnessStep> RecurrentSet::witness_chain(const Configuration& member) const {
  u128 key;
  if (!impl_->key_of(member, key) || !impl_->member_index.count(key)) {
    throw Error("not-a-member", "configuration is not in the recurrent set");
  }
  std::vector<WitnessStep> chain;
  for (u128 at = key;;) {
    const auto& rec = impl_->witness.at(at);
    if (rec.add_site < 0) break;  // reached c_max
    WitnessStep step;
    step.add_at = impl_->cs.site_name(rec.add_site);
    const u128 start = rec.pred + (static_cast<u128>(1) << impl_->codec.shift(rec.add_site));
    step.topplings = impl_->toppling_path(start, at);
    chain.push_back(std::move(step));
    at = rec.pred;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

RecurrentSet recurrent_stable_set(const SandpileSpec& spec, const OracleLimits& limits) {
  auto impl = std::make_unique<RecurrentSet::Impl>(compile(spec));
  const CompiledSpec& cs = impl->cs;
  impl->stats.stable_total = stable_state_count(cs, limits.state_cap);
  const long particle_cap = limits.effective_particle_cap(cs);
  impl->codec = Codec(cs, particle_cap);
  const Codec& codec = impl->codec;

  ClosureEngine engine(cs, codec, limits.jobs);
  const u128 cmax_key = codec.encode(c_max(cs).heights);
  impl->witness[cmax_key] = {cmax_key, -1, 0};
  std::vector<u128> frontier{cmax_key};

  int wave = 0;
  std::vector<int> heights;
  while (!frontier.empty()) {
    ++wave;
    std::sort(frontier.begin(), frontier.end());
    std::vector<u128> next;
    for (const u128 member : frontier) {
      codec.decode(member, heights);
      const long total = config_total(heights);
      for (int v = 0; v < cs.site_count(); ++v) {
        if (total + 1 > particle_cap) {
          throw ParticleCapExceeded("single-particle addition exceeds the particle cap of " +
                                    std::to_string(particle_cap));
        }
        const u128 seeded = member + (static_cast<u128>(1) << codec.shift(v));
        if (heights[v] + 1 < cs.capacity(v)) {
          // Still stable: the addition itself is the reachability step.
          if (impl->witness
                  .try_emplace(seeded, RecurrentSet::Impl::WitnessRec{member, v, wave})
                  .second) {
            next.push_back(seeded);
          }
          continue;
        }
        engine.run(seeded, [&](u128 stable_key) {
          if (impl->witness
                  .try_emplace(stable_key, RecurrentSet::Impl::WitnessRec{member, v, wave})
                  .second) {
            next.push_back(stable_key);
          }
        });
      }
    }
    frontier.swap(next);
  }

  if (engine.cycle_seen() && limits.strict_termination) {
    throw PotentialNonTermination("a toppling schedule revisits a configuration");
  }
  impl->stats.cycle_possible = engine.cycle_seen();
  impl->stats.waves = wave;
  impl->stats.configs_explored = engine.stats().explored;
  impl->stats.transitions = engine.stats().transitions;
  impl->stats.member_count = impl->witness.size();

  std::vector<u128> keys;
  keys.reserve(impl->witness.size());
  for (const auto& [key, rec] : impl->witness) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  impl->members.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    Configuration c;
    codec.decode(keys[i], c.heights);
    impl->members.push_back(std::move(c));
    impl->member_index[keys[i]] = static_cast<int>(i);
  }
  return RecurrentSet(std::move(impl));
}

RecurrenceAnswer is_recurrent(const RecurrentSet& set, const Configuration& config) {
  if (!is_stable(set.compiled(), config)) {
    throw NotStable("recurrence is decided on stable configurations only");
  }
  RecurrenceAnswer answer;
  answer.recurrent = set.contains(config);
  if (answer.recurrent) answer.chain = set.witness_chain(config);
  return answer;
}

RecurrenceAnswer is_recurrent(const SandpileSpec& spec, const Configuration& config,
                              const OracleLimits& limits) {
  return is_recurrent(recurrent_stable_set(spec, limits), config);
}

bool is_forbidden(const RecurrentSet& set, const SubConfiguration& sub) {
  const CompiledSpec& cs = set.compiled();
  std::vector<std::pair<int, int>> cells;
  cells.reserve(sub.region_heights.size());
  for (const auto& [site, height] : sub.region_heights) {
    cells.emplace_back(cs.site_index(site), height);
  }
  for (const auto& member : set.members()) {
    bool agrees = true;
    for (const auto& [index, height] : cells) {
      if (member.heights[index] != height) {
        agrees = false;
        break;
      }
    }
    if (agrees) return false;
  }
  return true;
}

bool is_forbidden(const SandpileSpec& spec, const SubConfiguration& sub,
                  const OracleLimits& limits) {
  return is_forbidden(recurrent_stable_set(spec, limits), sub);
}

std::vector<SubConfiguration> enumerate_minimal_fscs(const RecurrentSet& set, int max_region,
                                                     std::uint64_t check_budget) {
  const CompiledSpec& cs = set.compiled();
  const int n = cs.site_count();
  max_region = std::min(max_region, n);
  std::vector<SubConfiguration> result;
  if (max_region < 1) return result;

  std::uint64_t spent = 0;
  auto charge = [&](std::uint64_t amount) {
    spent += amount;
    if (spent > check_budget) {
      throw BudgetExceeded("minimal FSC enumeration exceeded its budget of " +
                           std::to_string(check_budget) + " checks");
    }
  };

  // Patterns over a region are packed in mixed radix over its capacities.
  auto pack = [&](const std::vector<int>& region, const Configuration& member) {
    std::uint64_t code = 0;
    for (int site : region) code = code * cs.capacity(site) + member.heights[site];
    return code;
  };

  std::map<std::vector<int>, std::unordered_set<std::uint64_t>> observed;

  // All site-index combinations of each size, ascending.
  std::vector<int> combo;
  auto for_each_combo = [&](int size, auto&& body) {
    combo.assign(size, 0);
    for (int i = 0; i < size; ++i) combo[i] = i;
    if (size > n) return;
    while (true) {
      body(combo);
      int i = size - 1;
      while (i >= 0 && combo[i] == n - size + i) --i;
      if (i < 0) break;
      ++combo[i];
      for (int j = i + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
  };

  for (int size = 1; size <= max_region; ++size) {
    for_each_combo(size, [&](const std::vector<int>& region) {
      charge(set.members().size());
      auto& seen = observed[region];
      for (const auto& member : set.members()) seen.insert(pack(region, member));

      std::uint64_t assignments = 1;
      for (int site : region) assignments *= cs.capacity(site);
      charge(assignments);
      std::vector<int> values(size, 0);
      for (std::uint64_t a = 0; a < assignments; ++a) {
        std::uint64_t code = a;
        for (int i = size - 1; i >= 0; --i) {
          values[i] = static_cast<int>(code % cs.capacity(region[i]));
          code /= cs.capacity(region[i]);
        }
        std::uint64_t packed = 0;
        for (int i = 0; i < size; ++i) packed = packed * cs.capacity(region[i]) + values[i];
        if (seen.count(packed)) continue;  // occurs in a member: not forbidden

        // Minimal iff every proper nonempty sub-region pattern does occur.
        bool minimal = true;
        for (unsigned subset = 1; subset + 1 < (1u << size) && minimal; ++subset) {
          std::vector<int> sub_region;
          std::uint64_t sub_packed = 0;
          for (int i = 0; i < size; ++i) {
            if (subset & (1u << i)) {
              sub_region.push_back(region[i]);
              sub_packed = sub_packed * cs.capacity(region[i]) + values[i];
            }
          }
          charge(1);
          if (!observed.at(sub_region).count(sub_packed)) minimal = false;
        }
        if (!minimal) continue;
        SubConfiguration sub;
        for (int i = 0; i < size; ++i) {
          sub.region_heights[cs.site_name(region[i])] = values[i];
        }
        result.push_back(std::move(sub));
      }
    });
  }
  return result;
}

std::vector<SubConfiguration> enumerate_minimal_fscs(const SandpileSpec& spec, int max_region,
                                                     const OracleLimits& limits,
                                                     std::uint64_t check_budget) {
  return enumerate_minimal_fscs(recurrent_stable_set(spec, limits), max_region, check_budget);
}

std::vector<std::vector<std::string>> minimal_irreducible_subsandpiles(
    const SandpileSpec& spec, const std::optional<std::string>& containing, int site_budget) {
  const CompiledSpec cs = compile(spec);
  const int n = cs.site_count();
  if (n > site_budget || n > 31) {
    throw BudgetExceeded("subset search over " + std::to_string(n) +
                         " sites exceeds the budget of " +
                         std::to_string(std::min(site_budget, 31)));
  }
  int containing_index = -1;
  if (containing) containing_index = cs.site_index(*containing);

  // A subset is irreducible iff every rule of every member hits it; minimal
  // irreducible sets are exactly the inclusion-minimal irreducible subsets.
  std::vector<std::vector<std::uint32_t>> support(n);
  for (int v = 0; v < n; ++v) {
    for (const auto& rule : cs.rules(v)) {
      std::uint32_t mask = 0;
      for (int target : rule) mask |= 1u << target;
      support[v].push_back(mask);
    }
  }

  std::vector<std::uint32_t> irreducible;
  const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;
  for (std::uint32_t mask = 1; mask <= all && mask != 0; ++mask) {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      if (!(mask & (1u << v))) continue;
      for (const auto rule_mask : support[v]) {
        if (!(rule_mask & mask)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) irreducible.push_back(mask);
  }
  std::sort(irreducible.begin(), irreducible.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<std::uint32_t> minimal;
  for (const auto mask : irreducible) {
    bool dominated = false;
    for (const auto m : minimal) {
      if ((m & mask) == m) {
        dominated = true;
        break;
      }
    }
    if (!dominated) minimal.push_back(mask);
  }

  std::vector<std::vector<std::string>> result;
  for (const auto mask : minimal) {
    if (containing_index >= 0 && !(mask & (1u << containing_index))) continue;
    std::vector<std::string> sites;
    for (int v = 0; v < n; ++v) {
      if (mask & (1u << v)) sites.push_back(cs.site_name(v));
    }
    result.push_back(std::move(sites));
  }
  std::sort(result.begin(), result.end(),
            [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
              return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
  return result;
}

}  // namespace sasm
