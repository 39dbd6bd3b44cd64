#pragma once

#include <cstdint>
#include <vector>

#include "dpmrf/dpp/backend.hpp"
#include "dpmrf/graph/cliques.hpp"
#include "dpmrf/graph/region_graph.hpp"

namespace dpmrf {

/// 1-neighborhoods: one per maximal clique, holding the clique's members
/// plus every vertex adjacent to a member, sorted ascending, no duplicates.
/// Neighborhoods overlap freely; only in-neighborhood duplicates are removed.
struct NeighborhoodSet {
  std::vector<std::uint32_t> offsets;  // size() + 1 entries
  std::vector<std::uint32_t> members;
  std::vector<std::uint32_t> source_clique;  // hood -> originating clique

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t total_slots() const { return members.size(); }
};

/// Builds 1-neighborhoods in four passes over (clique, member) slots: count
/// candidate entries per slot, scan to place them, write vertex ids keyed by
/// clique, then sort_by_key + unique to drop in-clique duplicates. k is
/// accepted for documentation but only k == 1 is supported.
NeighborhoodSet build_neighborhoods(const dpp::Backend& backend, const RegionGraph& graph,
                                    const CliqueSet& cliques, std::uint32_t k = 1);

}  // namespace dpmrf
