#pragma once

// Seeded spec corpora shared by the unit and acceptance suites. Everything is
// derived from fixed master seeds so expected values can be frozen.

#include <cstdint>
#include <vector>

#include "sasm/builders.hpp"

namespace sasm_tests {

inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// 200 small stochastic specs: <= 5 sites, capacities <= 2, <= 2 rules/site.
inline std::vector<sasm::SandpileSpec> cross_validation_corpus(int count = 200) {
  constexpr std::uint64_t kMaster = 0x5a5db01dull;
  std::vector<sasm::SandpileSpec> specs;
  specs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const auto seed = mix_seed(kMaster + i);
    const int site_count = 1 + static_cast<int>(seed % 5);
    specs.push_back(sasm::random_spec(site_count, 2, 2, seed));
  }
  return specs;
}

// Deterministic (single-rule) specs for confluence checks.
inline std::vector<sasm::SandpileSpec> deterministic_corpus(int count, int max_sites) {
  constexpr std::uint64_t kMaster = 0x0c0ffeeull;
  std::vector<sasm::SandpileSpec> specs;
  specs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const auto seed = mix_seed(kMaster + i);
    const int site_count = 1 + static_cast<int>(seed % max_sites);
    specs.push_back(sasm::random_spec(site_count, 2, 1, seed));
  }
  return specs;
}

}  // namespace sasm_tests
