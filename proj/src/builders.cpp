#include "sasm/builders.hpp"

#include <random>

namespace sasm {

std::string grid_site_name(int row, int col) {
  return "r" + std::to_string(row) + "c" + std::to_string(col);
}

namespace {

// Rule template = list of (dr, dc) neighbor offsets; off-grid positions drop
// out, so boundary sites lose the clipped particles to the sink.
SandpileSpec build_grid(const std::string& model, int rows, int cols,
                        const std::vector<std::pair<int, int>>& template_a,
                        const std::vector<std::pair<int, int>>& template_b) {
  if (rows < 1 || cols < 1) {
    throw InvalidDimensions("grid dimensions must be at least 1x1, got " +
                            std::to_string(rows) + "x" + std::to_string(cols));
  }
  SandpileSpec spec;
  spec.name = model + "-" + std::to_string(rows) + "x" + std::to_string(cols);
  auto clip = [&](int r, int c, const std::vector<std::pair<int, int>>& tmpl) {
    Rule rule;
    for (const auto& [dr, dc] : tmpl) {
      const int nr = r + dr;
      const int nc = c + dc;
      if (nr >= 1 && nr <= rows && nc >= 1 && nc <= cols) {
        rule.push_back(grid_site_name(nr, nc));
      }
    }
    return rule;
  };
  for (int r = 1; r <= rows; ++r) {
    for (int c = 1; c <= cols; ++c) {
      const auto site = grid_site_name(r, c);
      spec.sites.push_back(site);
      spec.capacity[site] = 2;
      spec.rules[site] = {clip(r, c, template_a), clip(r, c, template_b)};
    }
  }
  canonicalize(spec);
  return spec;
}

constexpr std::pair<int, int> kNorth{-1, 0};
constexpr std::pair<int, int> kSouth{1, 0};
constexpr std::pair<int, int> kEast{0, 1};
constexpr std::pair<int, int> kWest{0, -1};

}  // namespace

SandpileSpec grid_ns_ew(int rows, int cols) {
  return build_grid("ns-ew", rows, cols, {kNorth, kSouth}, {kEast, kWest});
}

SandpileSpec grid_ne_sw(int rows, int cols) {
  return build_grid("ne-sw", rows, cols, {kNorth, kEast}, {kSouth, kWest});
}

namespace {

// Bounded draw from the raw engine stream; implementation-independent, unlike
// std::uniform_int_distribution, so documents are byte-stable everywhere.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

bool has_conservative_core(const SandpileSpec& spec) {
  for (const auto& warning : validate(spec).warnings) {
    if (warning.code == "potential-nonterminating-branch") return true;
  }
  return false;
}

}  // namespace

SandpileSpec random_spec(int site_count, int max_capacity, int max_rules, std::uint64_t seed) {
  if (site_count < 1 || max_capacity < 1 || max_rules < 1) {
    throw InvalidDimensions("random_spec requires site_count, max_capacity, max_rules >= 1");
  }
  std::mt19937_64 rng(seed);
  int width = 1;
  for (int n = site_count; n >= 10; n /= 10) ++width;
  std::vector<std::string> names;
  for (int i = 1; i <= site_count; ++i) {
    auto digits = std::to_string(i);
    names.push_back("s" + std::string(width - digits.size(), '0') + digits);
  }

  const int max_attempts = 10000;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    SandpileSpec spec;
    spec.name = "random-n" + std::to_string(site_count) + "-s" + std::to_string(seed);
    spec.sites = names;
    for (int i = 0; i < site_count; ++i) {
      const auto& site = names[i];
      const int cap = 1 + static_cast<int>(draw(rng, max_capacity));
      spec.capacity[site] = cap;
      const int rule_count = 1 + static_cast<int>(draw(rng, max_rules));
      std::vector<Rule> rules;
      for (int r = 0; r < rule_count; ++r) {
        const int size =
            site_count == 1 ? 0 : static_cast<int>(draw(rng, static_cast<std::uint64_t>(cap) + 1));
        Rule rule;
        for (int k = 0; k < size; ++k) {
          // Uniform over the other sites; repeats are multi-delivery.
          auto pick = draw(rng, site_count - 1);
          const int target = static_cast<int>(pick) + (static_cast<int>(pick) >= i ? 1 : 0);
          rule.push_back(names[target]);
        }
        rules.push_back(std::move(rule));
      }
      spec.rules[site] = std::move(rules);
    }
    canonicalize(spec);
    if (has_conservative_core(spec)) continue;  // reject: stabilization could loop
    spec.metadata = Json{{"generator",
                          Json{{"scheme", "uniform-mod-v1"},
                               {"seed", seed},
                               {"site_count", site_count},
                               {"max_capacity", max_capacity},
                               {"max_rules", max_rules},
                               {"attempts", attempt}}}};
    return spec;
  }
  throw Error("generator-failed",
              "random_spec could not sample a terminating spec in " +
                  std::to_string(max_attempts) + " attempts");
}

}  // namespace sasm
