#include "dpmrf/mrf/engine.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>

#include "dpmrf/dpp/kernels.hpp"
#include "dpmrf/error.hpp"
#include "dpmrf/simd/kernels.hpp"

namespace dpmrf {

namespace {

std::uint64_t next_u64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double next_unit(std::uint64_t& state) {
  return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

void init_random(std::uint32_t num_labels, std::uint32_t num_vertices, std::uint64_t seed,
                 LabelParams& params, std::vector<std::uint32_t>& labels) {
  if (num_labels != 2) throw InputError("only 2 labels are supported");
  std::uint64_t state = seed;
  params.mu.resize(num_labels);
  params.sigma.resize(num_labels);
  for (auto& m : params.mu) m = 255.0 * next_unit(state);
  for (auto& s : params.sigma) s = std::max(255.0 * next_unit(state), kSigmaFloor);
  labels.resize(num_vertices);
  for (auto& l : labels) l = static_cast<std::uint32_t>(next_u64(state) % num_labels);
}

std::vector<std::uint32_t> slot_hood_map(const dpp::Backend& backend,
                                         const NeighborhoodSet& hoods) {
  std::vector<std::uint32_t> slot_hood(hoods.total_slots());
  dpp::for_each_index(backend, hoods.size(), [&](std::size_t h) {
    for (std::uint32_t s = hoods.offsets[h]; s < hoods.offsets[h + 1]; ++s)
      slot_hood[s] = static_cast<std::uint32_t>(h);
  });
  return slot_hood;
}

ReplicatedIndex replicate_by_label(const dpp::Backend& backend, const NeighborhoodSet& hoods,
                                   std::uint32_t num_labels) {
  const std::size_t S = hoods.total_slots();
  const std::uint32_t M = num_labels;
  const auto slot_hood = slot_hood_map(backend, hoods);
  ReplicatedIndex rep;
  rep.test_label.resize(M * S);
  rep.old_index.resize(M * S);
  rep.hood_id.resize(M * S);
  dpp::for_each_index(backend, S, [&](std::size_t s) {
    const std::uint32_t h = slot_hood[s];
    const std::size_t o = hoods.offsets[h];
    const std::size_t sz = hoods.offsets[h + 1] - o;
    const std::size_t j = s - o;
    for (std::uint32_t l = 0; l < M; ++l) {
      const std::size_t e = M * o + l * sz + j;
      rep.test_label[e] = l;
      rep.old_index[e] = static_cast<std::uint32_t>(s);
      rep.hood_id[e] = h;
    }
  });
  return rep;
}

std::vector<std::uint32_t> discord_counts(const dpp::Backend& backend, const RegionGraph& graph,
                                          const std::vector<std::uint32_t>& labels,
                                          std::uint32_t num_labels) {
  const std::size_t R = graph.num_vertices;
  return dpp::map_indexed(backend, std::size_t(num_labels) * R, [&](std::size_t i) {
    const std::uint32_t l = static_cast<std::uint32_t>(i / R);
    const std::uint32_t v = static_cast<std::uint32_t>(i % R);
    std::uint32_t c = 0;
    for (const std::uint32_t* u = graph.adj_begin(v); u != graph.adj_end(v); ++u)
      c += labels[*u] != l;
    return c;
  });
}

std::vector<double> compute_energies(const dpp::Backend& backend, const RegionGraph& graph,
                                     const NeighborhoodSet& hoods, const ReplicatedIndex& rep,
                                     const LabelParams& params,
                                     const std::vector<std::uint32_t>& labels, double beta) {
  const std::size_t E = rep.old_index.size();
  const std::size_t R = graph.num_vertices;
  const LabelTerms terms = make_label_terms(params);

  const auto vert = dpp::gather(backend, rep.old_index, hoods.members);
  const auto vert_mu = dpp::gather(backend, vert, graph.region_mean);
  const auto label_mu = dpp::gather(backend, rep.test_label, terms.mu);
  const auto two_var = dpp::gather(backend, rep.test_label, terms.two_var);
  const auto log_sigma = dpp::gather(backend, rep.test_label, terms.log_sigma);
  const auto discord = discord_counts(backend, graph, labels, params.num_labels());
  const auto disc = dpp::map_indexed(backend, E, [&](std::size_t e) {
    return discord[std::size_t(rep.test_label[e]) * R + vert[e]];
  });

  std::vector<double> out(E);
  dpp::parallel_chunks(backend, E, [&](std::size_t begin, std::size_t end) {
    simd::energy_map(vert_mu.data() + begin, label_mu.data() + begin, two_var.data() + begin,
                     log_sigma.data() + begin, disc.data() + begin, beta, out.data() + begin,
                     end - begin);
  });
  return out;
}

MinLabelEnergies min_label_energies(const dpp::Backend& backend, const ReplicatedIndex& rep,
                                    const std::vector<double>& energies, std::size_t num_slots) {
  struct EnergyLabel {
    double energy;
    std::uint32_t label;
  };
  const std::size_t E = energies.size();
  if (rep.old_index.size() != E || rep.test_label.size() != E)
    throw std::invalid_argument("min_label_energies: replicated index/energies mismatch");

  const auto entries = dpp::map_indexed(backend, E, [&](std::size_t e) {
    return EnergyLabel{energies[e], rep.test_label[e]};
  });
  // Stable sort: within a slot, entries stay in ascending label order, so
  // the keep-strictly-smaller reduction resolves ties toward label 0.
  const auto sorted = dpp::sort_by_key(backend, rep.old_index, entries);
  const auto mins =
      dpp::reduce_by_key(backend, sorted.keys, sorted.values,
                         [](const EnergyLabel& a, const EnergyLabel& b) {
                           return b.energy < a.energy ? b : a;
                         });

  MinLabelEnergies out;
  out.energy.assign(num_slots, 0.0);
  out.label.assign(num_slots, 0);
  dpp::for_each_index(backend, mins.keys.size(), [&](std::size_t r) {
    out.energy[mins.keys[r]] = mins.values[r].energy;
    out.label[mins.keys[r]] = mins.values[r].label;
  });
  return out;
}

std::vector<double> neighborhood_energy_sums(const dpp::Backend& backend,
                                             const std::vector<std::uint32_t>& slot_hood,
                                             const std::vector<double>& min_energy) {
  const auto sums = dpp::reduce_by_key(backend, slot_hood, min_energy, std::plus<double>{});
  return sums.values;
}

std::vector<std::uint8_t> check_convergence(const dpp::Backend& backend,
                                            const std::vector<std::vector<double>>& history,
                                            int window, double tol) {
  if (history.empty()) return {};
  const std::size_t series = history.back().size();
  if (static_cast<int>(history.size()) < window + 1)
    return std::vector<std::uint8_t>(series, 0);
  const auto& last = history.back();
  return dpp::map_indexed(backend, series, [&](std::size_t c) -> std::uint8_t {
    for (int i = 1; i <= window; ++i) {
      const double prev = history[history.size() - 1 - std::size_t(i)][c];
      if (!(std::abs(last[c] - prev) < tol)) return 0;
    }
    return 1;
  });
}

std::vector<std::uint32_t> update_labels(const dpp::Backend& backend,
                                         const NeighborhoodSet& hoods,
                                         const std::vector<std::uint32_t>& argmin_label,
                                         const std::vector<std::uint32_t>& old_labels) {
  if (argmin_label.size() != hoods.total_slots())
    throw std::invalid_argument("update_labels: one argmin per hood slot required");
  if (hoods.total_slots() == 0) return old_labels;
  const std::size_t R = old_labels.size();

  // Slots arrive hood-major, so a stable sort by vertex leaves each
  // vertex's entries in ascending hood order; keep the first.
  const auto sorted = dpp::sort_by_key(backend, hoods.members, argmin_label);
  const auto firsts = dpp::reduce_by_key(backend, sorted.keys, sorted.values,
                                         [](std::uint32_t a, std::uint32_t) { return a; });

  constexpr std::uint32_t kNoWrite = 0xFFFFFFFFu;
  const auto scattered = dpp::scatter(backend, firsts.values, firsts.keys, R, kNoWrite);
  return dpp::map_indexed(backend, R, [&](std::size_t v) {
    return scattered[v] == kNoWrite ? old_labels[v] : scattered[v];
  });
}

LabelParams update_parameters(const dpp::Backend& backend, const RegionGraph& graph,
                              const std::vector<std::uint32_t>& labels,
                              const LabelParams& previous) {
  const std::size_t R = graph.num_vertices;
  if (labels.size() != R)
    throw std::invalid_argument("update_parameters: one label per vertex required");
  LabelParams out = previous;
  if (R == 0) return out;

  const auto sorted = dpp::sort_by_key(backend, labels, graph.region_mean);
  const auto sums = dpp::reduce_by_key(backend, sorted.keys, sorted.values, std::plus<double>{});
  const auto counts = dpp::reduce_by_key(backend, sorted.keys, std::vector<std::uint32_t>(R, 1u),
                                         std::plus<std::uint32_t>{});
  dpp::for_each_index(backend, sums.keys.size(), [&](std::size_t r) {
    if (sums.keys[r] >= out.mu.size())
      throw std::invalid_argument("update_parameters: label out of range");
    out.mu[sums.keys[r]] = sums.values[r] / static_cast<double>(counts.values[r]);
  });

  const auto mu_of = dpp::gather(backend, sorted.keys, out.mu);
  const auto sq = dpp::map_indexed(backend, R, [&](std::size_t i) {
    const double d = sorted.values[i] - mu_of[i];
    return d * d;
  });
  const auto sq_sums = dpp::reduce_by_key(backend, sorted.keys, sq, std::plus<double>{});
  dpp::for_each_index(backend, sq_sums.keys.size(), [&](std::size_t r) {
    out.sigma[sq_sums.keys[r]] = std::max(
        std::sqrt(sq_sums.values[r] / static_cast<double>(counts.values[r])), kSigmaFloor);
  });
  return out;
}

}  // namespace dpmrf
