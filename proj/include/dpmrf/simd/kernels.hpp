#pragma once

#include <cstddef>
#include <cstdint>

#include "dpmrf/simd/dispatch.hpp"

// Block-level compute kernels behind the DPP layer. Each has a scalar
// reference implementation and an AVX2 variant compiled in its own TU;
// the unqualified entry points dispatch on simd::active(). Scalar and AVX2
// variants are bit-identical: integer kernels are exact by nature, and the
// floating-point energy kernel fixes its evaluation order (sub, mul, div,
// add, mul, add — no FMA contraction) in both variants.
namespace dpmrf::simd {

/// out[i] = (vm[i]-lm[i])^2 / two_var[i] + log_sigma[i] + beta * discord[i]
void energy_map(const double* vert_mu, const double* label_mu, const double* two_var,
                const double* log_sigma, const std::uint32_t* discord, double beta,
                double* out, std::size_t n);

/// Exclusive prefix sum with carry-in; returns carry + sum(in) (mod 2^32).
std::uint32_t u32_exclusive_scan(const std::uint32_t* in, std::uint32_t carry,
                                 std::uint32_t* out, std::size_t n);

/// Wraparound sum.
std::uint32_t u32_sum(const std::uint32_t* in, std::size_t n);

/// flags[i] = keys[i] != (i == 0 ? prev : keys[i-1]), as 0/1.
void neq_flags_u32(const std::uint32_t* keys, std::uint32_t prev, std::uint32_t* flags,
                   std::size_t n);
void neq_flags_u64(const std::uint64_t* keys, std::uint64_t prev, std::uint32_t* flags,
                   std::size_t n);

/// Confusion counts for binary images (values 0/1, positive = 1).
/// counts = {true_pos, true_neg, false_pos, false_neg}.
void confusion_u8(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n,
                  std::uint64_t counts[4]);

// Raw variants, exposed for the scalar/AVX2 equivalence tests.
namespace detail {

void energy_map_scalar(const double*, const double*, const double*, const double*,
                       const std::uint32_t*, double, double*, std::size_t);
std::uint32_t u32_exclusive_scan_scalar(const std::uint32_t*, std::uint32_t,
                                        std::uint32_t*, std::size_t);
std::uint32_t u32_sum_scalar(const std::uint32_t*, std::size_t);
void neq_flags_u32_scalar(const std::uint32_t*, std::uint32_t, std::uint32_t*, std::size_t);
void neq_flags_u64_scalar(const std::uint64_t*, std::uint64_t, std::uint32_t*, std::size_t);
void confusion_u8_scalar(const std::uint8_t*, const std::uint8_t*, std::size_t,
                         std::uint64_t[4]);

#if defined(DPMRF_HAVE_AVX2)
void energy_map_avx2(const double*, const double*, const double*, const double*,
                     const std::uint32_t*, double, double*, std::size_t);
std::uint32_t u32_exclusive_scan_avx2(const std::uint32_t*, std::uint32_t,
                                      std::uint32_t*, std::size_t);
std::uint32_t u32_sum_avx2(const std::uint32_t*, std::size_t);
void neq_flags_u32_avx2(const std::uint32_t*, std::uint32_t, std::uint32_t*, std::size_t);
void neq_flags_u64_avx2(const std::uint64_t*, std::uint64_t, std::uint32_t*, std::size_t);
void confusion_u8_avx2(const std::uint8_t*, const std::uint8_t*, std::size_t,
                       std::uint64_t[4]);
#endif

}  // namespace detail

}  // namespace dpmrf::simd
