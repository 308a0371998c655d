#pragma once

#include <string>
#include <vector>

#include "sasm/model.hpp"

namespace sasm {

/// Two irreducible regions glued at a shared site. The glue site must not
/// deliver to any other shared site within the union restriction.
struct GlueSpec {
  std::vector<std::string> region_a;
  std::vector<std::string> region_b;
  std::string glue_site;
};

/// Throws NotIrreducibleInput / GlueSiteNotShared / GlueSiteNotIsolated when
/// the GlueSpec invariants fail against `spec`.
void validate_glue(const SandpileSpec& spec, const GlueSpec& glue);

/// restrict(spec, region_a ∪ region_b); both inputs must restrict to
/// irreducible sandpiles, and then so does the union.
SandpileSpec union_subsandpiles(const SandpileSpec& spec,
                                const std::vector<std::string>& region_a,
                                const std::vector<std::string>& region_b);

/// Joins two forbidden sub-configurations that agree on their overlap and
/// adds one particle at `glue_site` (a shared site that delivers to no other
/// shared site). Forbiddenness of the inputs is the caller's responsibility;
/// the output is forbidden whenever they are.
SubConfiguration glue(const SandpileSpec& spec, const SubConfiguration& c1,
                      const SubConfiguration& c2, const std::string& glue_site);

/// The diagonal chain of `blocks` 2x2 all-zero blocks for the NS-EW grid
/// model, consecutive blocks sharing one corner carrying one particle.
/// Region size 3k + 1; built by folding glue() left to right. Offsets shift
/// the whole chain within a larger grid.
SubConfiguration manna_fsc_chain(int blocks, int row_offset = 0, int col_offset = 0);

/// Text rendering of a sub-configuration over grid-named sites ("r{i}c{j}"):
/// one row per grid row of the bounding box, heights as numbers and '.' for
/// sites outside the region. Falls back to "site=height" lines for non-grid
/// names.
std::string render_region(const SubConfiguration& sub);

}  // namespace sasm
