#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dpmrf {

inline constexpr double kSigmaFloor = 1e-3;

/// Per-label Gaussian parameters; sigma is always >= kSigmaFloor.
struct LabelParams {
  std::vector<double> mu;
  std::vector<double> sigma;

  std::uint32_t num_labels() const { return static_cast<std::uint32_t>(mu.size()); }
};

struct OptimizerConfig {
  std::uint32_t num_labels = 2;
  int em_max_iters = 20;
  int map_max_iters = 10;
  int convergence_window = 3;
  double convergence_tol = 1e-4;
  double beta = 1.0;
  std::uint64_t rng_seed = 0;
};

/// Label-replication indexing: for H neighborhoods totalling S slots and M
/// labels, each array has M*S entries laid out label-major within each
/// neighborhood (all of label 0's copy, then label 1's, then the next
/// neighborhood).
struct ReplicatedIndex {
  std::vector<std::uint32_t> test_label;  // trial label of the replicated element
  std::vector<std::uint32_t> old_index;   // back-index into the flat hoods array
  std::vector<std::uint32_t> hood_id;
};

/// Precomputed per-label terms of the energy. Shared by the data-parallel
/// engine, the reference optimizer and the test oracles so that all three
/// evaluate the exact same arithmetic.
struct LabelTerms {
  std::vector<double> mu;
  std::vector<double> two_var;    // 2 * sigma^2
  std::vector<double> log_sigma;  // ln sigma
};

inline LabelTerms make_label_terms(const LabelParams& params) {
  LabelTerms t;
  const std::size_t m = params.mu.size();
  t.mu.resize(m);
  t.two_var.resize(m);
  t.log_sigma.resize(m);
  for (std::size_t l = 0; l < m; ++l) {
    t.mu[l] = params.mu[l];
    t.two_var[l] = 2.0 * (params.sigma[l] * params.sigma[l]);
    t.log_sigma[l] = std::log(params.sigma[l]);
  }
  return t;
}

/// Energy of observing a region mean under a trial label: Gaussian negative
/// log-likelihood plus a Potts penalty per disagreeing graph neighbor.
/// Fixed evaluation order (sub, mul, div, add, mul, add) — the SIMD energy
/// kernel reproduces it bit for bit.
inline double label_energy(double region_mean, double mu, double two_var, double log_sigma,
                           double beta, std::uint32_t discord) {
  const double d = region_mean - mu;
  const double q = (d * d) / two_var;
  const double data_term = q + log_sigma;
  return data_term + beta * static_cast<double>(discord);
}

}  // namespace dpmrf
