#include "dpmrf/graph/neighborhoods.hpp"

#include <functional>

#include "dpmrf/dpp/kernels.hpp"
#include "dpmrf/error.hpp"

namespace dpmrf {

NeighborhoodSet build_neighborhoods(const dpp::Backend& backend, const RegionGraph& graph,
                                    const CliqueSet& cliques, std::uint32_t k) {
  if (k != 1) throw InputError("only 1-neighborhoods are supported");
  const std::size_t H = cliques.size();
  const std::size_t slots = cliques.members.size();

  std::vector<std::uint32_t> slot_clique(slots);
  dpp::for_each_index(backend, H, [&](std::size_t c) {
    for (std::uint32_t s = cliques.offsets[c]; s < cliques.offsets[c + 1]; ++s)
      slot_clique[s] = static_cast<std::uint32_t>(c);
  });

  // Candidates per (clique, member) slot: the member plus its neighbors.
  const auto counts = dpp::map_indexed(backend, slots, [&](std::size_t s) {
    return 1u + graph.degree(cliques.members[s]);
  });
  const auto offs = dpp::offsets_from_counts(backend, counts);

  std::vector<std::uint64_t> keys(offs.back());
  dpp::for_each_index(backend, slots, [&](std::size_t s) {
    const std::uint64_t hood = std::uint64_t(slot_clique[s]) << 32;
    const std::uint32_t m = cliques.members[s];
    std::size_t pos = offs[s];
    keys[pos++] = hood | m;
    for (const std::uint32_t* u = graph.adj_begin(m); u != graph.adj_end(m); ++u)
      keys[pos++] = hood | *u;
  });

  // Canonical order, then drop duplicates within each neighborhood. The
  // hood id in the high bits keeps distinct neighborhoods apart.
  const auto sorted = dpp::sort_by_key(backend, keys, std::vector<std::uint8_t>(keys.size(), 0));
  const auto uniq = dpp::unique(backend, sorted.keys);

  NeighborhoodSet hoods;
  hoods.members =
      dpp::map(backend, uniq, [](const std::uint64_t& e) { return static_cast<std::uint32_t>(e); });
  const auto hood_ids = dpp::map(backend, uniq, [](const std::uint64_t& e) {
    return static_cast<std::uint32_t>(e >> 32);
  });
  const auto per_hood = dpp::reduce_by_key(
      backend, hood_ids, std::vector<std::uint32_t>(hood_ids.size(), 1u), std::plus<std::uint32_t>{});
  const auto hood_counts = dpp::scatter(backend, per_hood.values, per_hood.keys, H, 0u);
  hoods.offsets = dpp::offsets_from_counts(backend, hood_counts);
  hoods.source_clique = dpp::map_indexed(backend, H, [](std::size_t h) {
    return static_cast<std::uint32_t>(h);
  });
  return hoods;
}

}  // namespace dpmrf
