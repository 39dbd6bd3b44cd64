#include "dpmrf/graph/cliques.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

#include "dpmrf/dpp/kernels.hpp"
#include "dpmrf/error.hpp"

namespace dpmrf {

namespace {

// Sorted list of vertices adjacent to every member (members excluded, since
// the graph has no self-loops). Members and adjacency lists are ascending.
std::vector<std::uint32_t> common_neighbors(const RegionGraph& g, const std::uint32_t* members,
                                            std::size_t k) {
  std::vector<std::uint32_t> common(g.adj_begin(members[0]), g.adj_end(members[0]));
  std::vector<std::uint32_t> next;
  for (std::size_t i = 1; i < k && !common.empty(); ++i) {
    next.clear();
    std::set_intersection(common.begin(), common.end(), g.adj_begin(members[i]),
                          g.adj_end(members[i]), std::back_inserter(next));
    common.swap(next);
  }
  return common;
}

// Lexicographic order of member sequences across mixed lengths.
void canonical_sort(CliqueSet& set) {
  const std::size_t count = set.size();
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(
        set.members.begin() + set.offsets[a], set.members.begin() + set.offsets[a + 1],
        set.members.begin() + set.offsets[b], set.members.begin() + set.offsets[b + 1]);
  });
  CliqueSet out;
  out.offsets.reserve(count + 1);
  out.members.reserve(set.members.size());
  out.offsets.push_back(0);
  for (std::uint32_t c : order) {
    out.members.insert(out.members.end(), set.members.begin() + set.offsets[c],
                       set.members.begin() + set.offsets[c + 1]);
    out.offsets.push_back(static_cast<std::uint32_t>(out.members.size()));
  }
  set = std::move(out);
}

}  // namespace

CliqueSet enumerate_maximal_cliques(const dpp::Backend& backend, const RegionGraph& graph) {
  const std::uint32_t R = graph.num_vertices;
  CliqueSet out;
  out.offsets.push_back(0);
  if (R == 0) return out;

  // Level k holds all k-cliques as ascending member lists, stride k.
  std::vector<std::uint32_t> frontier =
      dpp::map_indexed(backend, R, [](std::size_t v) { return static_cast<std::uint32_t>(v); });

  for (std::size_t k = 1; !frontier.empty(); ++k) {
    const std::size_t fk = frontier.size() / k;

    // One intersection per clique, reused by the count and write passes.
    const auto commons = dpp::map_indexed(backend, fk, [&](std::size_t i) {
      return common_neighbors(graph, frontier.data() + i * k, k);
    });

    // A clique is maximal when no vertex at all extends it. Extension
    // candidates above the maximum member keep every clique discovered once.
    const auto child_slots = dpp::map_indexed(backend, fk, [&](std::size_t i) -> std::uint32_t {
      const std::uint32_t last = frontier[i * k + k - 1];
      const auto& c = commons[i];
      const auto from = std::upper_bound(c.begin(), c.end(), last);
      return static_cast<std::uint32_t>((c.end() - from) * (k + 1));
    });
    const auto child_offsets = dpp::offsets_from_counts(backend, child_slots);

    std::vector<std::uint32_t> next(child_offsets.back());
    dpp::for_each_index(backend, fk, [&](std::size_t i) {
      const std::uint32_t* members = frontier.data() + i * k;
      const auto& c = commons[i];
      std::size_t pos = child_offsets[i];
      for (std::uint32_t u : c) {
        if (u <= members[k - 1]) continue;
        std::copy(members, members + k, next.begin() + pos);
        next[pos + k] = u;
        pos += k + 1;
      }
    });

    for (std::size_t i = 0; i < fk; ++i) {
      if (!commons[i].empty()) continue;
      out.members.insert(out.members.end(), frontier.begin() + i * k,
                         frontier.begin() + (i + 1) * k);
      out.offsets.push_back(static_cast<std::uint32_t>(out.members.size()));
    }

    frontier = std::move(next);
  }

  canonical_sort(out);
  return out;
}

CliqueSet brute_force_cliques(const RegionGraph& graph) {
  const std::uint32_t R = graph.num_vertices;
  if (R > 20) throw InputError("brute force clique enumeration is limited to 20 vertices");
  std::vector<std::uint32_t> adj(R, 0);
  for (std::uint32_t v = 0; v < R; ++v)
    for (const std::uint32_t* u = graph.adj_begin(v); u != graph.adj_end(v); ++u)
      adj[v] |= 1u << *u;

  CliqueSet out;
  out.offsets.push_back(0);
  const std::uint32_t full = (1u << R) - 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    bool clique = true;
    for (std::uint32_t rest = s; rest && clique;) {
      const std::uint32_t v = static_cast<std::uint32_t>(std::countr_zero(rest));
      rest &= rest - 1;
      clique = ((s & ~(1u << v)) & ~adj[v]) == 0;
    }
    if (!clique) continue;
    bool maximal = true;
    for (std::uint32_t others = full & ~s; others && maximal;) {
      const std::uint32_t u = static_cast<std::uint32_t>(std::countr_zero(others));
      others &= others - 1;
      maximal = (s & adj[u]) != s;
    }
    if (!maximal) continue;
    for (std::uint32_t rest = s; rest;) {
      const std::uint32_t v = static_cast<std::uint32_t>(std::countr_zero(rest));
      rest &= rest - 1;
      out.members.push_back(v);
    }
    out.offsets.push_back(static_cast<std::uint32_t>(out.members.size()));
  }
  canonical_sort(out);
  return out;
}

}  // namespace dpmrf
