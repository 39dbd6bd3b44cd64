#include <algorithm>
#include <cmath>
#include <functional>

#include "dpmrf/dpp/kernels.hpp"
#include "dpmrf/error.hpp"
#include "dpmrf/mrf/engine.hpp"

namespace dpmrf {

namespace {

void validate_config(const OptimizerConfig& config) {
  if (config.num_labels != 2) throw InputError("only 2 labels are supported");
  if (config.em_max_iters < 0) throw InputError("em_max_iters must be >= 0");
  if (config.map_max_iters < 1) throw InputError("map_max_iters must be >= 1");
  if (config.convergence_window < 1) throw InputError("convergence_window must be >= 1");
  if (config.convergence_window >= config.map_max_iters) {
    throw InputError("convergence_window must be < map_max_iters");
  }
  if (!(config.convergence_tol > 0.0)) throw InputError("convergence_tol must be > 0");
  if (!(config.beta >= 0.0)) throw InputError("beta must be >= 0");
}

bool all_set(const std::vector<std::uint8_t>& flags) {
  return std::all_of(flags.begin(), flags.end(), [](std::uint8_t f) { return f != 0; });
}

}  // namespace

OptimizeResult optimize(const dpp::Backend& backend, const RegionGraph& graph,
                        const NeighborhoodSet& hoods, const OptimizerConfig& config) {
  validate_config(config);
  OptimizeResult res;
  init_random(config.num_labels, graph.num_vertices, config.rng_seed, res.params, res.labels);
  if (config.em_max_iters == 0) return res;

  const auto rep = replicate_by_label(backend, hoods, config.num_labels);
  const auto slot_hood = slot_hood_map(backend, hoods);
  const std::size_t num_slots = hoods.total_slots();

  std::vector<std::vector<double>> em_history;
  for (int em = 0; em < config.em_max_iters; ++em) {
    EmIterationLog em_log;
    std::vector<std::vector<double>> hood_history;
    for (int it = 0; it < config.map_max_iters; ++it) {
      const auto energies =
          compute_energies(backend, graph, hoods, rep, res.params, res.labels, config.beta);
      const auto mins = min_label_energies(backend, rep, energies, num_slots);
      res.labels = update_labels(backend, hoods, mins.label, res.labels);
      hood_history.push_back(neighborhood_energy_sums(backend, slot_hood, mins.energy));

      MapIterationLog map_log;
      map_log.hood_energy = hood_history.back();
      map_log.converged = check_convergence(backend, hood_history, config.convergence_window,
                                            config.convergence_tol);
      const bool done = all_set(map_log.converged);
      em_log.map_iters.push_back(std::move(map_log));
      if (done) break;
    }

    res.params = update_parameters(backend, graph, res.labels, res.params);
    em_log.params = res.params;
    em_log.total_energy = dpp::reduce(backend, em_log.map_iters.back().hood_energy,
                                      std::plus<double>{}, 0.0);
    em_history.push_back({em_log.total_energy});
    const auto em_conv = check_convergence(backend, em_history, config.convergence_window,
                                           config.convergence_tol);
    em_log.converged = !em_conv.empty() && em_conv[0] != 0;
    res.trace.push_back(std::move(em_log));
    if (res.trace.back().converged) break;
  }
  return res;
}

OptimizeResult optimize_reference(const RegionGraph& graph, const NeighborhoodSet& hoods,
                                  const OptimizerConfig& config) {
  validate_config(config);
  const dpp::Backend serial = dpp::Backend::serial();
  OptimizeResult res;
  init_random(config.num_labels, graph.num_vertices, config.rng_seed, res.params, res.labels);
  if (config.em_max_iters == 0) return res;

  const std::size_t H = hoods.size();
  const std::uint32_t M = config.num_labels;

  std::vector<std::vector<double>> em_history;
  for (int em = 0; em < config.em_max_iters; ++em) {
    EmIterationLog em_log;
    const LabelTerms terms = make_label_terms(res.params);
    std::vector<std::vector<double>> hood_history;
    for (int it = 0; it < config.map_max_iters; ++it) {
      std::vector<double> hood_energy(H, 0.0);
      std::vector<std::uint32_t> winners;
      for (std::size_t h = 0; h < H; ++h) {
        const std::uint32_t lo = hoods.offsets[h];
        const std::uint32_t hi = hoods.offsets[h + 1];
        winners.assign(hi - lo, 0);
        double sum = 0.0;
        for (std::uint32_t s = lo; s < hi; ++s) {
          const std::uint32_t v = hoods.members[s];
          double best = 0.0;
          std::uint32_t best_label = 0;
          for (std::uint32_t l = 0; l < M; ++l) {
            std::uint32_t dc = 0;
            for (const std::uint32_t* u = graph.adj_begin(v); u != graph.adj_end(v); ++u)
              dc += res.labels[*u] != l;
            const double e = label_energy(graph.region_mean[v], terms.mu[l], terms.two_var[l],
                                          terms.log_sigma[l], config.beta, dc);
            if (l == 0 || e < best) {
              best = e;
              best_label = l;
            }
          }
          winners[s - lo] = best_label;
          sum = s == lo ? best : sum + best;
        }
        for (std::uint32_t s = lo; s < hi; ++s) res.labels[hoods.members[s]] = winners[s - lo];
        hood_energy[h] = sum;
      }
      hood_history.push_back(std::move(hood_energy));

      MapIterationLog map_log;
      map_log.hood_energy = hood_history.back();
      map_log.converged = check_convergence(serial, hood_history, config.convergence_window,
                                            config.convergence_tol);
      const bool done = all_set(map_log.converged);
      em_log.map_iters.push_back(std::move(map_log));
      if (done) break;
    }

    res.params = update_parameters(serial, graph, res.labels, res.params);
    em_log.params = res.params;
    em_log.total_energy = dpp::reduce(serial, em_log.map_iters.back().hood_energy,
                                      std::plus<double>{}, 0.0);
    em_history.push_back({em_log.total_energy});
    const auto em_conv = check_convergence(serial, em_history, config.convergence_window,
                                           config.convergence_tol);
    em_log.converged = !em_conv.empty() && em_conv[0] != 0;
    res.trace.push_back(std::move(em_log));
    if (res.trace.back().converged) break;
  }
  return res;
}

}  // namespace dpmrf
