#pragma once

#include <cstdint>
#include <string>

#include "sasm/model.hpp"

namespace sasm {

/// "r{i}c{j}", 1-indexed, row 1 at the north edge.
std::string grid_site_name(int row, int col);

/// Grid sandpile with capacity 2 everywhere and rules {north,south} and
/// {east,west}, clipped at the boundary (Manna's model). Clipped-equal rules
/// are merged, so the 1x1 grid has the single all-to-sink rule.
SandpileSpec grid_ns_ew(int rows, int cols);

/// Same grid with rule templates {north,east} and {south,west}.
SandpileSpec grid_ne_sw(int rows, int cols);

/// Seed-deterministic random spec: capacities in [1, max_capacity], 1 to
/// max_rules rules per site, rule sizes in [0, C(v)], targets drawn from the
/// other sites with replacement. Candidates whose conservative core is
/// nonempty are rejected and resampled so that every emitted spec has
/// terminating stabilization under every schedule. The sampling scheme and
/// seed are recorded in the document metadata.
SandpileSpec random_spec(int site_count, int max_capacity, int max_rules, std::uint64_t seed);

}  // namespace sasm
