#include "sasm/fscgen.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sasm/builders.hpp"
#include "sasm/reduce.hpp"

namespace sasm {

namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::vector<std::string> union_of(const std::set<std::string>& a,
                                  const std::set<std::string>& b) {
  std::set<std::string> u = a;
  u.insert(b.begin(), b.end());
  return {u.begin(), u.end()};
}

void check_glue_site_isolated(const SandpileSpec& spec, const std::set<std::string>& inter,
                              const std::string& glue_site,
                              const std::vector<std::string>& union_sites) {
  const auto restricted = restrict_spec(spec, union_sites);
  for (const auto& rule : restricted.rules.at(glue_site)) {
    for (const auto& target : rule) {
      if (target != glue_site && inter.count(target)) {
        throw GlueSiteNotIsolated("glue site " + glue_site + " delivers to shared site " +
                                  target);
      }
    }
  }
}

}  // namespace

void validate_glue(const SandpileSpec& spec, const GlueSpec& glue) {
  if (!is_irreducible(restrict_spec(spec, glue.region_a)) ||
      !is_irreducible(restrict_spec(spec, glue.region_b))) {
    throw NotIrreducibleInput("both glue regions must restrict to irreducible sandpiles");
  }
  const auto a = as_set(glue.region_a);
  const auto b = as_set(glue.region_b);
  if (!a.count(glue.glue_site) || !b.count(glue.glue_site)) {
    throw GlueSiteNotShared(glue.glue_site);
  }
  std::set<std::string> inter;
  for (const auto& s : a) {
    if (b.count(s)) inter.insert(s);
  }
  check_glue_site_isolated(spec, inter, glue.glue_site, union_of(a, b));
}

SandpileSpec union_subsandpiles(const SandpileSpec& spec,
                                const std::vector<std::string>& region_a,
                                const std::vector<std::string>& region_b) {
  if (!is_irreducible(restrict_spec(spec, region_a))) {
    throw NotIrreducibleInput("region_a does not restrict to an irreducible sandpile");
  }
  if (!is_irreducible(restrict_spec(spec, region_b))) {
    throw NotIrreducibleInput("region_b does not restrict to an irreducible sandpile");
  }
  auto result = restrict_spec(spec, union_of(as_set(region_a), as_set(region_b)));
  if (!is_irreducible(result)) {
    throw Error("union-not-irreducible",
                "internal error: union of irreducible restrictions is reducible");
  }
  return result;
}

SubConfiguration glue(const SandpileSpec& spec, const SubConfiguration& c1,
                      const SubConfiguration& c2, const std::string& glue_site) {
  const auto region_a = c1.region();
  const auto region_b = c2.region();
  if (!is_irreducible(restrict_spec(spec, region_a)) ||
      !is_irreducible(restrict_spec(spec, region_b))) {
    throw NotIrreducibleInput("both glue regions must restrict to irreducible sandpiles");
  }
  const auto a = as_set(region_a);
  const auto b = as_set(region_b);
  if (!a.count(glue_site) || !b.count(glue_site)) throw GlueSiteNotShared(glue_site);
  std::set<std::string> inter;
  for (const auto& [site, height] : c1.region_heights) {
    auto it = c2.region_heights.find(site);
    if (it == c2.region_heights.end()) continue;
    inter.insert(site);
    if (it->second != height) throw RegionsDisagreeOnIntersection(site);
  }
  const auto union_sites = union_of(a, b);
  check_glue_site_isolated(spec, inter, glue_site, union_sites);

  SubConfiguration joined;
  joined.region_heights = c1.region_heights;
  joined.region_heights.insert(c2.region_heights.begin(), c2.region_heights.end());
  joined.region_heights[glue_site] += 1;
  return joined;
}

SubConfiguration manna_fsc_chain(int blocks, int row_offset, int col_offset) {
  if (blocks < 1) {
    throw InvalidCount("chain needs at least one block, got " + std::to_string(blocks));
  }
  if (row_offset < 0 || col_offset < 0) {
    throw InvalidCount("chain offsets must be nonnegative");
  }
  const auto ambient = grid_ns_ew(blocks + 1 + row_offset, blocks + 1 + col_offset);
  auto block_zeros = [&](int i) {
    SubConfiguration sub;
    for (int r = i; r <= i + 1; ++r) {
      for (int c = i; c <= i + 1; ++c) {
        sub.region_heights[grid_site_name(r + row_offset, c + col_offset)] = 0;
      }
    }
    return sub;
  };
  SubConfiguration chain = block_zeros(1);
  for (int i = 2; i <= blocks; ++i) {
    chain = glue(ambient, chain, block_zeros(i),
                 grid_site_name(i + row_offset, i + col_offset));
  }
  return chain;
}

std::string render_region(const SubConfiguration& sub) {
  // Grid names only: "r{i}c{j}" with positive integers.
  auto parse_cell = [](const std::string& name, int& row, int& col) {
    if (name.size() < 4 || name[0] != 'r') return false;
    const auto c_pos = name.find('c', 1);
    if (c_pos == std::string::npos || c_pos == 1 || c_pos + 1 >= name.size()) return false;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (i != c_pos && !std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    }
    row = std::stoi(name.substr(1, c_pos - 1));
    col = std::stoi(name.substr(c_pos + 1));
    return row >= 1 && col >= 1;
  };

  std::map<std::pair<int, int>, int> cells;
  int min_r = 1 << 30, max_r = 0, min_c = 1 << 30, max_c = 0;
  for (const auto& [site, height] : sub.region_heights) {
    int r, c;
    if (!parse_cell(site, r, c)) {
      std::string out;
      for (const auto& [s, h] : sub.region_heights) {
        out += s + "=" + std::to_string(h) + "\n";
      }
      return out;
    }
    cells[{r, c}] = height;
    min_r = std::min(min_r, r);
    max_r = std::max(max_r, r);
    min_c = std::min(min_c, c);
    max_c = std::max(max_c, c);
  }
  std::string out;
  for (int r = min_r; r <= max_r; ++r) {
    for (int c = min_c; c <= max_c; ++c) {
      if (c > min_c) out += ' ';
      auto it = cells.find({r, c});
      out += it == cells.end() ? "." : std::to_string(it->second);
    }
    out += '\n';
  }
  return out;
}

}  // namespace sasm
