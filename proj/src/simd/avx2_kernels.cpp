#include "dpmrf/simd/kernels.hpp"

#if defined(DPMRF_HAVE_AVX2)

#include <immintrin.h>

namespace dpmrf::simd::detail {

void energy_map_avx2(const double* vert_mu, const double* label_mu, const double* two_var,
                     const double* log_sigma, const std::uint32_t* discord, double beta,
                     double* out, std::size_t n) {
  const __m256d beta_v = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vm = _mm256_loadu_pd(vert_mu + i);
    const __m256d lm = _mm256_loadu_pd(label_mu + i);
    const __m256d tv = _mm256_loadu_pd(two_var + i);
    const __m256d ls = _mm256_loadu_pd(log_sigma + i);
    const __m128i dc32 =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(discord + i));
    const __m256d dc = _mm256_cvtepi32_pd(dc32);

    const __m256d d = _mm256_sub_pd(vm, lm);
    const __m256d q = _mm256_div_pd(_mm256_mul_pd(d, d), tv);
    const __m256d data_term = _mm256_add_pd(q, ls);
    const __m256d e = _mm256_add_pd(data_term, _mm256_mul_pd(beta_v, dc));
    _mm256_storeu_pd(out + i, e);
  }
  for (; i < n; ++i) {
    const double d = vert_mu[i] - label_mu[i];
    const double q = (d * d) / two_var[i];
    const double data_term = q + log_sigma[i];
    out[i] = data_term + beta * static_cast<double>(discord[i]);
  }
}

namespace {

// Inclusive prefix sum of 8 u32 lanes.
inline __m256i inclusive_scan8(__m256i x) {
  x = _mm256_add_epi32(x, _mm256_slli_si256(x, 4));
  x = _mm256_add_epi32(x, _mm256_slli_si256(x, 8));
  // carry the low 128-bit lane's total into the high lane
  __m256i low_total = _mm256_shuffle_epi32(x, _MM_SHUFFLE(3, 3, 3, 3));
  low_total = _mm256_permute2x128_si256(low_total, low_total, 0x08);
  return _mm256_add_epi32(x, low_total);
}

}  // namespace

std::uint32_t u32_exclusive_scan_avx2(const std::uint32_t* in, std::uint32_t carry,
                                      std::uint32_t* out, std::size_t n) {
  const __m256i rot = _mm256_set_epi32(6, 5, 4, 3, 2, 1, 0, 7);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
    const __m256i inc = inclusive_scan8(v);
    __m256i exc = _mm256_permutevar8x32_epi32(inc, rot);
    exc = _mm256_blend_epi32(exc, _mm256_setzero_si256(), 0x01);
    exc = _mm256_add_epi32(exc, _mm256_set1_epi32(static_cast<int>(carry)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), exc);
    carry += static_cast<std::uint32_t>(_mm256_extract_epi32(inc, 7));
  }
  for (; i < n; ++i) {
    out[i] = carry;
    carry += in[i];
  }
  return carry;
}

std::uint32_t u32_sum_avx2(const std::uint32_t* in, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc = _mm256_add_epi32(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i)));
  }
  alignas(32) std::uint32_t lanes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint32_t sum = 0;
  for (std::uint32_t lane : lanes) sum += lane;
  for (; i < n; ++i) sum += in[i];
  return sum;
}

void neq_flags_u32_avx2(const std::uint32_t* keys, std::uint32_t prev, std::uint32_t* flags,
                        std::size_t n) {
  if (n == 0) return;
  flags[0] = keys[0] != prev ? 1u : 0u;
  const __m256i one = _mm256_set1_epi32(1);
  std::size_t i = 1;
  for (; i + 8 <= n; i += 8) {
    const __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i));
    const __m256i prv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i - 1));
    const __m256i eq = _mm256_cmpeq_epi32(cur, prv);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(flags + i), _mm256_andnot_si256(eq, one));
  }
  for (; i < n; ++i) flags[i] = keys[i] != keys[i - 1] ? 1u : 0u;
}

void neq_flags_u64_avx2(const std::uint64_t* keys, std::uint64_t prev, std::uint32_t* flags,
                        std::size_t n) {
  if (n == 0) return;
  flags[0] = keys[0] != prev ? 1u : 0u;
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i pack = _mm256_set_epi32(0, 0, 0, 0, 6, 4, 2, 0);
  std::size_t i = 1;
  for (; i + 4 <= n; i += 4) {
    const __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i));
    const __m256i prv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i - 1));
    const __m256i neq = _mm256_andnot_si256(_mm256_cmpeq_epi64(cur, prv), one);
    const __m128i packed = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(neq, pack));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(flags + i), packed);
  }
  for (; i < n; ++i) flags[i] = keys[i] != keys[i - 1] ? 1u : 0u;
}

void confusion_u8_avx2(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n,
                       std::uint64_t counts[4]) {
  const __m256i zero = _mm256_setzero_si256();
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pred + i));
    const __m256i t = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(truth + i));
    const auto pm = ~static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(p, zero)));
    const auto tm = ~static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(t, zero)));
    tp += static_cast<unsigned>(__builtin_popcount(pm & tm));
    tn += static_cast<unsigned>(__builtin_popcount(~pm & ~tm));
    fp += static_cast<unsigned>(__builtin_popcount(pm & ~tm));
    fn += static_cast<unsigned>(__builtin_popcount(~pm & tm));
  }
  for (; i < n; ++i) {
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

#endif  // DPMRF_HAVE_AVX2
