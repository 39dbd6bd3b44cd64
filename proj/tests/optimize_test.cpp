#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "dpmrf/error.hpp"
#include "dpmrf/graph/cliques.hpp"
#include "dpmrf/graph/label_map.hpp"
#include "dpmrf/graph/neighborhoods.hpp"
#include "dpmrf/graph/region_graph.hpp"
#include "dpmrf/mrf/engine.hpp"

using namespace dpmrf;

namespace {

struct Pipeline {
  RegionGraph graph;
  NeighborhoodSet hoods;
};

Pipeline pipeline_from_image(const GrayImage& image, std::uint32_t block) {
  auto map = grid_oversegment(image.width, image.height, block);
  validate_label_map(map);
  Pipeline p;
  p.graph = build_region_graph(dpp::Backend::serial(), image, map);
  const auto cliques = enumerate_maximal_cliques(dpp::Backend::serial(), p.graph);
  p.hoods = build_neighborhoods(dpp::Backend::serial(), p.graph, cliques);
  return p;
}

Pipeline two_block_pipeline() {
  GrayImage img;
  img.width = 16;
  img.height = 16;
  img.pixels.resize(256);
  for (std::uint32_t y = 0; y < 16; ++y) {
    for (std::uint32_t x = 0; x < 16; ++x) {
      img.pixels[y * 16 + x] = x < 8 ? 50 : 200;
    }
  }
  return pipeline_from_image(img, 4);
}

Pipeline k4_pipeline() {
  RegionGraph g;
  g.num_vertices = 4;
  g.offsets = {0, 3, 6, 9, 12};
  g.neighbors = {1, 2, 3, 0, 2, 3, 0, 1, 3, 0, 1, 2};
  g.region_mean = {10.0, 12.0, 200.0, 210.0};
  g.region_size = {1, 1, 1, 1};
  Pipeline p;
  p.graph = g;
  const auto cliques = enumerate_maximal_cliques(dpp::Backend::serial(), g);
  const auto hoods = build_neighborhoods(dpp::Backend::serial(), g, cliques);
  p.hoods = hoods;
  return p;
}

void check_equal_results(const OptimizeResult& a, const OptimizeResult& b) {
  CHECK(a.labels == b.labels);
  CHECK(a.params.mu == b.params.mu);
  CHECK(a.params.sigma == b.params.sigma);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(std::bit_cast<std::uint64_t>(a.trace[i].total_energy) ==
          std::bit_cast<std::uint64_t>(b.trace[i].total_energy));
    CHECK(a.trace[i].converged == b.trace[i].converged);
    CHECK(a.trace[i].params.mu == b.trace[i].params.mu);
    CHECK(a.trace[i].params.sigma == b.trace[i].params.sigma);
    REQUIRE(a.trace[i].map_iters.size() == b.trace[i].map_iters.size());
    for (std::size_t j = 0; j < a.trace[i].map_iters.size(); ++j) {
      CHECK(a.trace[i].map_iters[j].hood_energy == b.trace[i].map_iters[j].hood_energy);
      CHECK(a.trace[i].map_iters[j].converged == b.trace[i].map_iters[j].converged);
    }
  }
}

}  // namespace

TEST_CASE("a clean two-intensity image separates into its two blocks") {
  const auto p = two_block_pipeline();
  OptimizerConfig config;
  config.rng_seed = 7;
  const auto result = optimize(dpp::Backend::serial(), p.graph, p.hoods, config);
  const auto reference = optimize_reference(p.graph, p.hoods, config);

  for (const auto* r : {&result, &reference}) {
    REQUIRE(r->labels.size() == p.graph.num_vertices);
    const std::uint32_t low_label = r->labels[0];
    const std::uint32_t high_label = 1 - low_label;
    for (std::uint32_t v = 0; v < p.graph.num_vertices; ++v) {
      const std::uint32_t want = p.graph.region_mean[v] == 50.0 ? low_label : high_label;
      CHECK(r->labels[v] == want);
    }
    CHECK(r->params.mu[low_label] == 50.0);
    CHECK(r->params.mu[high_label] == 200.0);
    CHECK(r->params.sigma[low_label] == kSigmaFloor);
    CHECK(r->params.sigma[high_label] == kSigmaFloor);
  }
}

TEST_CASE("zero EM iterations return the seeded initialization unchanged") {
  const auto p = two_block_pipeline();
  OptimizerConfig config;
  config.em_max_iters = 0;
  config.rng_seed = 99;
  const auto result = optimize(dpp::Backend::serial(), p.graph, p.hoods, config);
  const auto reference = optimize_reference(p.graph, p.hoods, config);

  LabelParams init_params;
  std::vector<std::uint32_t> init_labels;
  init_random(2, p.graph.num_vertices, 99, init_params, init_labels);

  for (const auto* r : {&result, &reference}) {
    CHECK(r->labels == init_labels);
    CHECK(r->params.mu == init_params.mu);
    CHECK(r->params.sigma == init_params.sigma);
    CHECK(r->trace.empty());
  }
}

TEST_CASE("optimization results are identical across backends and chunk sizes") {
  const auto p = two_block_pipeline();
  OptimizerConfig config;
  config.rng_seed = 5;
  const auto baseline = optimize(dpp::Backend::serial(), p.graph, p.hoods, config);
  for (const auto& b :
       {dpp::Backend::threaded(1), dpp::Backend::threaded(8), dpp::Backend::threaded(2, 1),
        dpp::Backend::threaded(4, 64), dpp::Backend::threaded(8, 4096)}) {
    check_equal_results(optimize(b, p.graph, p.hoods, config), baseline);
  }
}

TEST_CASE("with a single neighborhood the engine matches the sweep reference exactly") {
  const auto p = k4_pipeline();
  REQUIRE(p.hoods.size() == 1);
  OptimizerConfig config;
  config.rng_seed = 11;
  const auto result = optimize(dpp::Backend::threaded(4, 1), p.graph, p.hoods, config);
  const auto reference = optimize_reference(p.graph, p.hoods, config);
  check_equal_results(result, reference);
}

TEST_CASE("loops stop at their limits or with an honest convergence flag") {
  // A tolerance below every representable energy change: a flag can only come
  // from exactly repeated energies, i.e. a relaxation fixed point.
  const auto p = two_block_pipeline();
  OptimizerConfig config;
  config.em_max_iters = 4;
  config.map_max_iters = 5;
  config.convergence_window = 2;
  config.convergence_tol = 1e-300;
  config.rng_seed = 7;
  const auto result = optimize(dpp::Backend::serial(), p.graph, p.hoods, config);
  REQUIRE(!result.trace.empty());
  CHECK(result.trace.size() <= 4);
  if (result.trace.size() < 4) CHECK(result.trace.back().converged);
  const auto is_set = [](std::uint8_t f) { return f != 0; };
  for (std::size_t e = 0; e < result.trace.size(); ++e) {
    const auto& em = result.trace[e];
    if (e < 2) CHECK(!em.converged);  // a window of 2 needs 3 recorded totals
    REQUIRE(!em.map_iters.empty());
    CHECK(em.map_iters.size() <= 5);
    CHECK(std::isfinite(em.total_energy));
    for (std::size_t t = 0; t < em.map_iters.size(); ++t) {
      const auto& map = em.map_iters[t];
      REQUIRE(map.hood_energy.size() == p.hoods.size());
      REQUIRE(map.converged.size() == p.hoods.size());
      for (double energy : map.hood_energy) CHECK(std::isfinite(energy));
      if (t < 2) CHECK(std::none_of(map.converged.begin(), map.converged.end(), is_set));
    }
    if (em.map_iters.size() < 5) {
      const auto& last = em.map_iters.back();
      CHECK(std::all_of(last.converged.begin(), last.converged.end(), is_set));
    }
  }
}

TEST_CASE("iteration counts never exceed the configured bounds") {
  const auto p = two_block_pipeline();
  OptimizerConfig config;
  config.rng_seed = 7;
  const auto result = optimize(dpp::Backend::serial(), p.graph, p.hoods, config);
  CHECK(result.trace.size() <= static_cast<std::size_t>(config.em_max_iters));
  for (const auto& em : result.trace) {
    CHECK(em.map_iters.size() <= static_cast<std::size_t>(config.map_max_iters));
    CHECK(em.params.mu.size() == 2);
    CHECK(em.params.sigma.size() == 2);
    CHECK(std::isfinite(em.total_energy));
  }
  if (result.trace.size() < static_cast<std::size_t>(config.em_max_iters)) {
    CHECK(result.trace.back().converged);
  }
}

TEST_CASE("invalid optimizer configurations are rejected") {
  const auto p = k4_pipeline();
  const auto run = [&](const OptimizerConfig& config) {
    optimize(dpp::Backend::serial(), p.graph, p.hoods, config);
  };
  OptimizerConfig base;

  auto c = base;
  c.num_labels = 3;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.em_max_iters = -1;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.map_max_iters = 0;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.convergence_window = 0;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.convergence_window = c.map_max_iters;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.convergence_window = c.map_max_iters + 2;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.convergence_tol = 0.0;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.convergence_tol = -1.0;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.beta = -0.5;
  CHECK_THROWS_AS(run(c), InputError);
  c = base;
  c.beta = 0.0;
  CHECK_NOTHROW(run(c));
  c = base;
  c.em_max_iters = 0;
  CHECK_NOTHROW(run(c));
  CHECK_THROWS_AS(optimize_reference(p.graph, p.hoods, [] {
                    OptimizerConfig bad;
                    bad.num_labels = 3;
                    return bad;
                  }()),
                  InputError);
}
