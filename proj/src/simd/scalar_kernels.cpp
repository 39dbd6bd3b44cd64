#include "dpmrf/simd/kernels.hpp"

namespace dpmrf::simd::detail {

void energy_map_scalar(const double* vert_mu, const double* label_mu, const double* two_var,
                       const double* log_sigma, const std::uint32_t* discord, double beta,
                       double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = vert_mu[i] - label_mu[i];
    const double q = (d * d) / two_var[i];
    const double data_term = q + log_sigma[i];
    out[i] = data_term + beta * static_cast<double>(discord[i]);
  }
}

std::uint32_t u32_exclusive_scan_scalar(const std::uint32_t* in, std::uint32_t carry,
                                        std::uint32_t* out, std::size_t n) {
  std::uint32_t acc = carry;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = acc;
    acc += in[i];
  }
  return acc;
}

std::uint32_t u32_sum_scalar(const std::uint32_t* in, std::size_t n) {
  std::uint32_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += in[i];
  return acc;
}

void neq_flags_u32_scalar(const std::uint32_t* keys, std::uint32_t prev, std::uint32_t* flags,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    flags[i] = keys[i] != prev ? 1u : 0u;
    prev = keys[i];
  }
}

void neq_flags_u64_scalar(const std::uint64_t* keys, std::uint64_t prev, std::uint32_t* flags,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    flags[i] = keys[i] != prev ? 1u : 0u;
    prev = keys[i];
  }
}

void confusion_u8_scalar(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n,
                         std::uint64_t counts[4]) {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool p = pred[i] != 0;
    const bool t = truth[i] != 0;
    tp += static_cast<std::uint64_t>(p && t);
    tn += static_cast<std::uint64_t>(!p && !t);
    fp += static_cast<std::uint64_t>(p && !t);
    fn += static_cast<std::uint64_t>(!p && t);
  }
  counts[0] = tp;
  counts[1] = tn;
  counts[2] = fp;
  counts[3] = fn;
}

}  // namespace dpmrf::simd::detail
