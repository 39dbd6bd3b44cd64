#include "dpmrf/bench/harness.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

#include "dpmrf/error.hpp"
#include "dpmrf/graph/cliques.hpp"
#include "dpmrf/graph/neighborhoods.hpp"
#include "dpmrf/graph/region_graph.hpp"
#include "dpmrf/mrf/engine.hpp"

namespace dpmrf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double>(to - from).count();
}

struct Structures {
  RegionGraph graph;
  NeighborhoodSet hoods;
};

Structures timed_structures(const dpp::Backend& backend, const GrayImage& image,
                            const LabelMap& labels, BenchRecord& rec) {
  Structures s;
  auto t0 = Clock::now();
  s.graph = build_region_graph(backend, image, labels);
  auto t1 = Clock::now();
  const auto cliques = enumerate_maximal_cliques(backend, s.graph);
  auto t2 = Clock::now();
  s.hoods = build_neighborhoods(backend, s.graph, cliques);
  auto t3 = Clock::now();
  rec.graph_s = seconds(t0, t1);
  rec.cliques_s = seconds(t1, t2);
  rec.hoods_s = seconds(t2, t3);
  return s;
}

}  // namespace

std::vector<BenchRecord> run_bench(const GrayImage& image, const LabelMap& labels,
                                   const BenchPlan& plan) {
  if (plan.repeats < 1) throw InputError("bench: repeat count must be >= 1");
  if (plan.threads.empty()) throw InputError("bench: thread list must not be empty");

  std::vector<BenchRecord> records;

  BenchRecord base;
  base.dataset = plan.dataset;
  base.backend = "reference";
  base.threads = 1;
  {
    const auto s = timed_structures(dpp::Backend::serial(), image, labels, base);
    const auto t0 = Clock::now();
    const auto res = optimize_reference(s.graph, s.hoods, plan.config);
    base.optimize_s = seconds(t0, Clock::now());
    (void)res;
  }
  base.wall_s = base.optimize_s;
  base.speedup = 1.0;
  records.push_back(base);
  const double t_star = base.wall_s;

  for (unsigned threads : plan.threads) {
    for (unsigned rep = 0; rep < plan.repeats; ++rep) {
      BenchRecord rec;
      rec.dataset = plan.dataset;
      rec.backend = "threaded";
      rec.threads = threads;
      rec.rep = rep;
      const dpp::Backend backend = dpp::Backend::threaded(threads);
      const auto s = timed_structures(backend, image, labels, rec);
      const auto t0 = Clock::now();
      const auto res = optimize(backend, s.graph, s.hoods, plan.config);
      rec.optimize_s = seconds(t0, Clock::now());
      (void)res;
      rec.wall_s = rec.optimize_s;
      rec.speedup = rec.wall_s > 0.0 ? t_star / rec.wall_s : 0.0;
      records.push_back(rec);
    }
  }
  return records;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "dataset,backend,threads,chunk,rep,graph_s,cliques_s,hoods_s,optimize_s,wall_s,speedup\n";
  out << std::fixed << std::setprecision(6);
  for (const auto& r : records) {
    out << r.dataset << ',' << r.backend << ',' << r.threads << ',' << r.chunk << ',' << r.rep
        << ',' << r.graph_s << ',' << r.cliques_s << ',' << r.hoods_s << ',' << r.optimize_s
        << ',' << r.wall_s << ',' << r.speedup << '\n';
  }
  return out.str();
}

}  // namespace dpmrf
