#pragma once

#include <cstdint>
#include <vector>

#include "dpmrf/dpp/backend.hpp"
#include "dpmrf/graph/region_graph.hpp"

namespace dpmrf {

/// Maximal cliques, flattened. Members of each clique are sorted ascending
/// and the cliques themselves are in lexicographic order of their member
/// sequences, so two CliqueSets over the same graph compare with ==.
struct CliqueSet {
  std::vector<std::uint32_t> offsets;  // size() + 1 entries
  std::vector<std::uint32_t> members;

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  bool operator==(const CliqueSet&) const = default;
};

/// Enumerates all maximal cliques by breadth-first lexicographic extension:
/// the frontier at level k holds k-cliques; each extends by candidates above
/// its maximum member, and a clique is emitted when no vertex at all is
/// adjacent to every member. Isolated vertices yield singleton cliques.
CliqueSet enumerate_maximal_cliques(const dpp::Backend& backend, const RegionGraph& graph);

/// Exhaustive subset-enumeration reference; graphs up to 20 vertices.
CliqueSet brute_force_cliques(const RegionGraph& graph);

}  // namespace dpmrf
