#pragma once

#include <cstdint>
#include <vector>

#include "dpmrf/dpp/backend.hpp"
#include "dpmrf/graph/neighborhoods.hpp"
#include "dpmrf/graph/region_graph.hpp"
#include "dpmrf/mrf/model.hpp"

namespace dpmrf {

/// Seeded random parameters (mu, sigma uniform in [0,255], sigma floored)
/// and labels (uniform over {0,1}). Only num_labels == 2 is supported.
void init_random(std::uint32_t num_labels, std::uint32_t num_vertices, std::uint64_t seed,
                 LabelParams& params, std::vector<std::uint32_t>& labels);

/// Expands each neighborhood into one block per label, label-major within
/// the neighborhood (the testLabel/oldIndex/hoodId layout).
ReplicatedIndex replicate_by_label(const dpp::Backend& backend, const NeighborhoodSet& hoods,
                                   std::uint32_t num_labels);

/// slot -> neighborhood id for every flat hood slot.
std::vector<std::uint32_t> slot_hood_map(const dpp::Backend& backend,
                                         const NeighborhoodSet& hoods);

/// discord[l*R + v] = number of graph neighbors of v whose current label
/// differs from l.
std::vector<std::uint32_t> discord_counts(const dpp::Backend& backend, const RegionGraph& graph,
                                          const std::vector<std::uint32_t>& labels,
                                          std::uint32_t num_labels);

/// Per replicated element e with vertex v = hoods[oldIndex[e]] and trial
/// label l = testLabel[e]:
///   energy[e] = (regionMean[v]-mu_l)^2 / (2 sigma_l^2) + ln sigma_l
///             + beta * |{u in adj(v) : label[u] != l}|
/// Neighbor labels are the ones passed in (frozen for the whole call).
std::vector<double> compute_energies(const dpp::Backend& backend, const RegionGraph& graph,
                                     const NeighborhoodSet& hoods, const ReplicatedIndex& rep,
                                     const LabelParams& params,
                                     const std::vector<std::uint32_t>& labels, double beta);

struct MinLabelEnergies {
  std::vector<double> energy;        // per flat hood slot
  std::vector<std::uint32_t> label;  // argmin; ties pick the smaller label
};

/// Per-slot minimum over the M replicated energies (sort by slot, then a
/// keyed min-reduction). num_slots = hoods.total_slots().
MinLabelEnergies min_label_energies(const dpp::Backend& backend, const ReplicatedIndex& rep,
                                    const std::vector<double>& energies, std::size_t num_slots);

/// Keyed sum of per-slot minimum energies; slot_hood maps each flat slot to
/// its neighborhood id (contiguous runs).
std::vector<double> neighborhood_energy_sums(const dpp::Backend& backend,
                                             const std::vector<std::uint32_t>& slot_hood,
                                             const std::vector<double>& min_energy);

/// Converged flags per series. history rows are iterations (oldest first),
/// columns are series; a series converges when it has window+1 entries and
/// the newest differs from each of the window previous ones by < tol.
std::vector<std::uint8_t> check_convergence(const dpp::Backend& backend,
                                            const std::vector<std::vector<double>>& history,
                                            int window, double tol);

/// Writes each slot's argmin label to its vertex. A vertex appearing in
/// several neighborhoods takes the slot from the lowest-numbered one
/// (stable sort by vertex, first-writer selection, then a scatter with
/// distinct targets); vertices in no neighborhood keep their old label.
std::vector<std::uint32_t> update_labels(const dpp::Backend& backend,
                                         const NeighborhoodSet& hoods,
                                         const std::vector<std::uint32_t>& argmin_label,
                                         const std::vector<std::uint32_t>& old_labels);

/// M-step: mu_l = mean of region_mean over vertices labeled l, sigma_l =
/// population standard deviation of the same set floored at kSigmaFloor.
/// Labels with no vertices keep their previous parameters.
LabelParams update_parameters(const dpp::Backend& backend, const RegionGraph& graph,
                              const std::vector<std::uint32_t>& labels,
                              const LabelParams& previous);

struct MapIterationLog {
  std::vector<double> hood_energy;
  std::vector<std::uint8_t> converged;
};

struct EmIterationLog {
  std::vector<MapIterationLog> map_iters;
  double total_energy = 0.0;
  bool converged = false;
  LabelParams params;  // after this iteration's M-step
};

struct OptimizeResult {
  std::vector<std::uint32_t> labels;
  LabelParams params;
  std::vector<EmIterationLog> trace;
};

/// Full EM/MAP optimization. Outer EM loop (at most em_max_iters): an inner
/// MAP loop (at most map_max_iters) relaxes labels with parameters fixed —
/// each iteration evaluates energies against the iteration-start labeling,
/// commits the argmin labels, records neighborhood energy sums and checks
/// the per-hood window — then one parameter update and the EM-level window
/// check on the total energy. Per-hood histories reset each EM iteration.
/// Fully determined by (inputs, config); independent of backend.
OptimizeResult optimize(const dpp::Backend& backend, const RegionGraph& graph,
                        const NeighborhoodSet& hoods, const OptimizerConfig& config);

/// Coarse-grained reference: same energies and convergence rules, but each
/// MAP iteration sweeps neighborhoods in index order, evaluating every hood
/// against the labels as of that hood's start and committing its argmin
/// labels immediately. Serial by design; serves as the T* baseline and as a
/// semantic oracle.
OptimizeResult optimize_reference(const RegionGraph& graph, const NeighborhoodSet& hoods,
                                  const OptimizerConfig& config);

}  // namespace dpmrf
