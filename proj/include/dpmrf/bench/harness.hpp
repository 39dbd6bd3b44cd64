#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpmrf/graph/image.hpp"
#include "dpmrf/graph/label_map.hpp"
#include "dpmrf/mrf/model.hpp"

namespace dpmrf {

struct BenchRecord {
  std::string dataset;
  std::string backend;  // "reference", "serial" or "threaded"
  unsigned threads = 1;
  std::size_t chunk = 0;
  unsigned rep = 0;
  double graph_s = 0.0;
  double cliques_s = 0.0;
  double hoods_s = 0.0;
  double optimize_s = 0.0;
  double wall_s = 0.0;    // optimization phase only
  double speedup = 0.0;   // reference wall / this wall
};

struct BenchPlan {
  std::string dataset;
  std::vector<unsigned> threads = {1, 2, 4, 8};
  unsigned repeats = 3;
  OptimizerConfig config;
};

/// Runs the reference optimizer once to set the speedup baseline, then the
/// thread-pool optimizer for every (threads, rep) combination. Structure
/// construction (graph, cliques, neighborhoods) is timed per record but
/// excluded from wall_s.
std::vector<BenchRecord> run_bench(const GrayImage& image, const LabelMap& labels,
                                   const BenchPlan& plan);

/// CSV with header:
/// dataset,backend,threads,chunk,rep,graph_s,cliques_s,hoods_s,optimize_s,wall_s,speedup
std::string bench_csv(const std::vector<BenchRecord>& records);

}  // namespace dpmrf
