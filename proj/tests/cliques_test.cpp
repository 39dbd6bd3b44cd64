#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "dpmrf/dpp/kernels.hpp"
#include "dpmrf/error.hpp"
#include "dpmrf/graph/cliques.hpp"
#include "dpmrf/graph/label_map.hpp"
#include "dpmrf/graph/neighborhoods.hpp"
#include "dpmrf/graph/region_graph.hpp"

using namespace dpmrf;

namespace {

RegionGraph make_graph(std::uint32_t n,
                       const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<std::set<std::uint32_t>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  RegionGraph g;
  g.num_vertices = n;
  g.offsets.push_back(0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t u : adj[v]) g.neighbors.push_back(u);
    g.offsets.push_back(static_cast<std::uint32_t>(g.neighbors.size()));
    g.region_mean.push_back(0.0);
    g.region_size.push_back(1);
  }
  return g;
}

RegionGraph random_graph(std::mt19937_64& rng, std::uint32_t n, double p) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (coin(rng) < p) edges.emplace_back(a, b);
    }
  }
  return make_graph(n, edges);
}

CliqueSet make_cliques(const std::vector<std::vector<std::uint32_t>>& cliques) {
  CliqueSet set;
  set.offsets.push_back(0);
  for (const auto& c : cliques) {
    set.members.insert(set.members.end(), c.begin(), c.end());
    set.offsets.push_back(static_cast<std::uint32_t>(set.members.size()));
  }
  return set;
}

// Core number of the graph: repeatedly peel a minimum-degree vertex.
std::uint32_t degeneracy(const RegionGraph& g) {
  std::vector<std::set<std::uint32_t>> adj(g.num_vertices);
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
    adj[v] = {g.adj_begin(v), g.adj_end(v)};
  }
  std::vector<bool> gone(g.num_vertices, false);
  std::uint32_t worst = 0;
  for (std::uint32_t step = 0; step < g.num_vertices; ++step) {
    std::uint32_t best = 0, best_deg = ~0u;
    for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
      if (!gone[v] && adj[v].size() < best_deg) {
        best = v;
        best_deg = static_cast<std::uint32_t>(adj[v].size());
      }
    }
    worst = std::max(worst, best_deg);
    gone[best] = true;
    for (std::uint32_t u : adj[best]) adj[u].erase(best);
    adj[best].clear();
  }
  return worst;
}

std::vector<std::uint32_t> hop_closure(const RegionGraph& g, const std::uint32_t* begin,
                                       const std::uint32_t* end) {
  std::set<std::uint32_t> s(begin, end);
  for (const std::uint32_t* c = begin; c != end; ++c) {
    s.insert(g.adj_begin(*c), g.adj_end(*c));
  }
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("maximal cliques of a 4-cycle are its edges") {
  const auto g = make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const auto cliques = enumerate_maximal_cliques(dpp::Backend::serial(), g);
  CHECK(cliques == make_cliques({{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
}

TEST_CASE("a triangle with a tail yields the triangle and the tail edge") {
  const auto g = make_graph(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  const auto cliques = enumerate_maximal_cliques(dpp::Backend::serial(), g);
  CHECK(cliques == make_cliques({{0, 1, 2}, {2, 3}}));
}

TEST_CASE("isolated vertices are singleton maximal cliques") {
  const auto g = make_graph(3, {});
  const auto cliques = enumerate_maximal_cliques(dpp::Backend::serial(), g);
  CHECK(cliques == make_cliques({{0}, {1}, {2}}));
}

TEST_CASE("a complete graph is one clique") {
  const auto g = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(brute_force_cliques(g) == make_cliques({{0, 1, 2, 3}}));
  CHECK(enumerate_maximal_cliques(dpp::Backend::serial(), g) ==
        make_cliques({{0, 1, 2, 3}}));
}

TEST_CASE("empty graphs produce no cliques") {
  const auto g = make_graph(0, {});
  CHECK(enumerate_maximal_cliques(dpp::Backend::serial(), g).size() == 0);
  CHECK(brute_force_cliques(g).size() == 0);
}

TEST_CASE("the exhaustive reference refuses large graphs") {
  const auto g = make_graph(21, {{0, 1}});
  CHECK_THROWS_AS(brute_force_cliques(g), InputError);
}

TEST_CASE("clique members ascend and cliques are lexicographic") {
  std::mt19937_64 rng(41);
  const auto g = random_graph(rng, 12, 0.4);
  const auto cliques = enumerate_maximal_cliques(dpp::Backend::serial(), g);
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    const auto* b = cliques.members.data() + cliques.offsets[c];
    const auto* e = cliques.members.data() + cliques.offsets[c + 1];
    CHECK(b != e);
    CHECK(std::is_sorted(b, e));
    if (c + 1 < cliques.size()) {
      const auto* nb = cliques.members.data() + cliques.offsets[c + 1];
      const auto* ne = cliques.members.data() + cliques.offsets[c + 2];
      CHECK(std::lexicographical_compare(b, e, nb, ne));
    }
  }
}

TEST_CASE("enumeration matches brute force and hoods match the hop closure") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint32_t> size(0, 12);
  const auto backend = dpp::Backend::threaded(4, 16);
  for (int iter = 0; iter < 500; ++iter) {
    const double p = 0.1 * (1 + iter % 9);
    const auto g = random_graph(rng, size(rng), p);
    const auto cliques = enumerate_maximal_cliques(backend, g);
    REQUIRE(cliques == brute_force_cliques(g));

    const auto hoods = build_neighborhoods(backend, g, cliques);
    REQUIRE(hoods.size() == cliques.size());
    std::vector<bool> covered(g.num_vertices, false);
    for (std::size_t h = 0; h < hoods.size(); ++h) {
      CHECK(hoods.source_clique[h] == h);
      const auto* hb = hoods.members.data() + hoods.offsets[h];
      const auto* he = hoods.members.data() + hoods.offsets[h + 1];
      const auto expected = hop_closure(g, cliques.members.data() + cliques.offsets[h],
                                        cliques.members.data() + cliques.offsets[h + 1]);
      REQUIRE(std::vector<std::uint32_t>(hb, he) == expected);
      for (const auto* m = hb; m != he; ++m) covered[*m] = true;
    }
    REQUIRE(hoods.offsets.size() == hoods.size() + 1);
    CHECK(hoods.offsets.back() == hoods.total_slots());
    for (std::uint32_t v = 0; v < g.num_vertices; ++v) CHECK(covered[v]);
  }
}

TEST_CASE("grid region graphs have only small cliques") {
  std::mt19937_64 rng(43);
  GrayImage img;
  img.width = 32;
  img.height = 32;
  img.pixels.resize(32 * 32);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(d(rng));
  for (std::uint32_t block : {1u, 3u, 4u}) {
    auto lm = grid_oversegment(32, 32, block);
    const auto g = build_region_graph(dpp::Backend::serial(), img, lm);
    const auto cliques = enumerate_maximal_cliques(dpp::Backend::serial(), g);
    const std::uint32_t cap = degeneracy(g) + 1;
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      const std::uint32_t sz = cliques.offsets[c + 1] - cliques.offsets[c];
      CHECK(sz <= 4);
      CHECK(sz <= cap);
    }
  }
}

TEST_CASE("neighborhoods of the worked examples") {
  const auto tri = make_graph(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  const auto tri_cliques = enumerate_maximal_cliques(dpp::Backend::serial(), tri);
  const auto tri_hoods = build_neighborhoods(dpp::Backend::serial(), tri, tri_cliques);
  REQUIRE(tri_hoods.size() == 2);
  CHECK(tri_hoods.offsets == std::vector<std::uint32_t>{0, 4, 8});
  CHECK(tri_hoods.members ==
        std::vector<std::uint32_t>{0, 1, 2, 3, 0, 1, 2, 3});
  CHECK(tri_hoods.source_clique == std::vector<std::uint32_t>{0, 1});

  const auto cyc = make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const auto cyc_cliques = enumerate_maximal_cliques(dpp::Backend::serial(), cyc);
  const auto cyc_hoods = build_neighborhoods(dpp::Backend::serial(), cyc, cyc_cliques);
  REQUIRE(cyc_cliques.offsets[1] == 2);  // first clique is {0, 1}
  CHECK(std::vector<std::uint32_t>(cyc_hoods.members.begin() + cyc_hoods.offsets[0],
                                   cyc_hoods.members.begin() + cyc_hoods.offsets[1]) ==
        std::vector<std::uint32_t>{0, 1, 2, 3});

  const auto lone = make_graph(3, {});
  const auto lone_cliques = enumerate_maximal_cliques(dpp::Backend::serial(), lone);
  const auto lone_hoods = build_neighborhoods(dpp::Backend::serial(), lone, lone_cliques);
  CHECK(lone_hoods.members == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(lone_hoods.offsets == std::vector<std::uint32_t>{0, 1, 2, 3});
}

TEST_CASE("only 1-neighborhoods are supported") {
  const auto g = make_graph(2, {{0, 1}});
  const auto cliques = enumerate_maximal_cliques(dpp::Backend::serial(), g);
  CHECK_THROWS_AS(build_neighborhoods(dpp::Backend::serial(), g, cliques, 2), InputError);
  CHECK_THROWS_AS(build_neighborhoods(dpp::Backend::serial(), g, cliques, 0), InputError);
}

TEST_CASE("clique and neighborhood construction are backend independent") {
  std::mt19937_64 rng(44);
  for (int iter = 0; iter < 10; ++iter) {
    const auto g = random_graph(rng, 30, 0.15);
    const auto ref_cliques = enumerate_maximal_cliques(dpp::Backend::serial(), g);
    const auto ref_hoods = build_neighborhoods(dpp::Backend::serial(), g, ref_cliques);
    for (const auto& b : {dpp::Backend::threaded(2, 1), dpp::Backend::threaded(8, 64)}) {
      const auto cliques = enumerate_maximal_cliques(b, g);
      CHECK(cliques == ref_cliques);
      const auto hoods = build_neighborhoods(b, g, cliques);
      CHECK(hoods.offsets == ref_hoods.offsets);
      CHECK(hoods.members == ref_hoods.members);
      CHECK(hoods.source_clique == ref_hoods.source_clique);
    }
  }
}
