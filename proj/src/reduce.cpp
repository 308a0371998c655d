#include "sasm/reduce.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace sasm {

namespace {

Json site_list_json(const std::vector<std::string>& sites) {
  Json arr = Json::array();
  for (const auto& s : sites) arr.push_back(s);
  return arr;
}

}  // namespace

Json ReduceTrace::to_json(bool include_layers) const {
  Json j;
  j["flushed"] = site_list_json(flushed);
  j["residual"] = site_list_json(residual);
  if (include_layers) {
    Json arr = Json::array();
    for (const auto& layer : layers) arr.push_back(site_list_json(layer));
    j["layers"] = arr;
  }
  return j;
}

SandpileSpec restrict_spec(const SandpileSpec& spec, const std::vector<std::string>& keep) {
  std::set<std::string> known(spec.sites.begin(), spec.sites.end());
  std::set<std::string> keep_set;
  for (const auto& site : keep) {
    if (!known.count(site)) throw UnknownSite(site);
    keep_set.insert(site);
  }
  SandpileSpec out;
  out.name = spec.name;
  out.metadata = spec.metadata;
  out.sites.assign(keep_set.begin(), keep_set.end());
  for (const auto& site : out.sites) {
    out.capacity[site] = spec.capacity.at(site);
    std::vector<Rule> clipped;
    for (const auto& rule : spec.rules.at(site)) {
      Rule kept;
      for (const auto& target : rule) {
        if (keep_set.count(target)) kept.push_back(target);
      }
      clipped.push_back(std::move(kept));
    }
    out.rules[site] = std::move(clipped);
  }
  canonicalize(out);
  return out;
}

namespace {

// Shared engine: repeatedly removes sites owning a rule whose support has
// left the alive set. `pick` chooses which currently-removable sites go in
// each round; the canonical schedule takes all of them.
struct FlushEngine {
  const CompiledSpec& cs;
  std::vector<char> alive;

  explicit FlushEngine(const CompiledSpec& spec)
      : cs(spec), alive(spec.site_count(), 1) {}

  std::vector<int> removable() const {
    std::vector<int> out;
    for (int v = 0; v < cs.site_count(); ++v) {
      if (!alive[v]) continue;
      for (const auto& rule : cs.rules(v)) {
        bool support_alive = false;
        for (int target : rule) {
          if (alive[target]) {
            support_alive = true;
            break;
          }
        }
        if (!support_alive) {
          out.push_back(v);
          break;
        }
      }
    }
    return out;
  }

  void remove(const std::vector<int>& sites) {
    for (int v : sites) alive[v] = 0;
  }
};

ReduceTrace finish_trace(const SandpileSpec& spec, const CompiledSpec& cs,
                         const FlushEngine& engine,
                         std::vector<std::vector<std::string>> layers) {
  ReduceTrace trace;
  trace.layers = std::move(layers);
  for (int v = 0; v < cs.site_count(); ++v) {
    (engine.alive[v] ? trace.residual : trace.flushed).push_back(cs.site_name(v));
  }
  trace.reduced_spec = restrict_spec(spec, trace.residual);
  return trace;
}

}  // namespace

ReduceTrace reduce(const SandpileSpec& spec) {
  const CompiledSpec cs = compile(spec);
  FlushEngine engine(cs);
  std::vector<std::vector<std::string>> layers;
  while (true) {
    const auto round = engine.removable();
    if (round.empty()) break;
    std::vector<std::string> layer;
    layer.reserve(round.size());
    for (int v : round) layer.push_back(cs.site_name(v));
    layers.push_back(std::move(layer));
    engine.remove(round);
  }
  return finish_trace(spec, cs, engine, std::move(layers));
}

ReduceTrace reduce_with_schedule(const SandpileSpec& spec, std::uint64_t schedule_seed) {
  const CompiledSpec cs = compile(spec);
  FlushEngine engine(cs);
  std::mt19937_64 rng(schedule_seed);
  while (true) {
    auto candidates = engine.removable();
    if (candidates.empty()) break;
    // Take a random nonempty subset, in random order.
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const std::size_t take = 1 + rng() % candidates.size();
    candidates.resize(take);
    engine.remove(candidates);
  }
  return finish_trace(spec, cs, engine, {});
}

bool is_irreducible(const SandpileSpec& spec) { return reduce(spec).flushed.empty(); }

bool is_minimal_irreducible(const SandpileSpec& spec) {
  if (spec.sites.empty()) return false;
  if (!is_irreducible(spec)) return false;
  for (const auto& deleted : spec.sites) {
    std::vector<std::string> rest;
    for (const auto& site : spec.sites) {
      if (site != deleted) rest.push_back(site);
    }
    if (!reduce(restrict_spec(spec, rest)).residual.empty()) return false;
  }
  return true;
}

namespace {

FscWitness zero_witness(const std::vector<std::string>& region) {
  FscWitness w;
  for (const auto& site : region) w.sub_configuration.region_heights[site] = 0;
  return w;
}

}  // namespace

std::optional<FscWitness> decide_fsc_exists(const SandpileSpec& spec) {
  const auto trace = reduce(spec);
  if (trace.residual.empty()) return std::nullopt;
  return zero_witness(trace.residual);
}

std::vector<std::vector<std::string>> layered_decomposition(const SandpileSpec& spec,
                                                            const std::string& site) {
  std::vector<std::string> rest;
  bool found = false;
  for (const auto& s : spec.sites) {
    if (s == site) {
      found = true;
    } else {
      rest.push_back(s);
    }
  }
  if (!found) throw UnknownSite(site);
  auto trace = reduce(restrict_spec(spec, rest));
  if (!trace.residual.empty()) {
    throw NotMinimalIrreducible("deleting " + site + " leaves a nonempty residual of " +
                                std::to_string(trace.residual.size()) + " site(s)");
  }
  return trace.layers;
}

std::vector<FscWitness> enumerate_fsc_supports(const SandpileSpec& spec, int budget) {
  std::vector<FscWitness> witnesses;
  std::set<std::vector<std::string>> seen_regions;
  std::set<std::vector<std::string>> queued;
  std::vector<std::vector<std::string>> queue{spec.sites};
  queued.insert(spec.sites);
  int runs = 0;
  for (std::size_t head = 0; head < queue.size() && runs < budget; ++head) {
    const auto keep = queue[head];
    ++runs;
    const auto trace = reduce(restrict_spec(spec, keep));
    if (trace.residual.empty()) continue;
    if (seen_regions.insert(trace.residual).second) {
      witnesses.push_back(zero_witness(trace.residual));
    }
    if (trace.residual.size() <= 1) continue;
    for (const auto& drop : trace.residual) {
      std::vector<std::string> child;
      for (const auto& site : trace.residual) {
        if (site != drop) child.push_back(site);
      }
      if (queued.insert(child).second) queue.push_back(child);
    }
  }
  std::sort(witnesses.begin(), witnesses.end(), [](const FscWitness& a, const FscWitness& b) {
    const auto ra = a.sub_configuration.region();
    const auto rb = b.sub_configuration.region();
    if (ra.size() != rb.size()) return ra.size() < rb.size();
    return ra < rb;
  });
  return witnesses;
}

}  // namespace sasm
