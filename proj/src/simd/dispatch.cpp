#include "dpmrf/simd/dispatch.hpp"
#include "dpmrf/simd/kernels.hpp"

#include <atomic>

namespace dpmrf::simd {

namespace {

Level detect_impl() {
#if defined(DPMRF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Level::Avx2;
#endif
  return Level::Scalar;
}

std::atomic<int> g_override{-1};

}  // namespace

Level detect() {
  static const Level level = detect_impl();
  return level;
}

Level active() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o < 0) return detect();
  const Level requested = static_cast<Level>(o);
  return requested == Level::Avx2 && detect() != Level::Avx2 ? Level::Scalar : requested;
}

void set_override(Level level) {
  g_override.store(static_cast<int>(level), std::memory_order_relaxed);
}

void clear_override() { g_override.store(-1, std::memory_order_relaxed); }

const char* name(Level level) {
  return level == Level::Avx2 ? "avx2" : "scalar";
}

void energy_map(const double* vert_mu, const double* label_mu, const double* two_var,
                const double* log_sigma, const std::uint32_t* discord, double beta,
                double* out, std::size_t n) {
#if defined(DPMRF_HAVE_AVX2)
  if (active() == Level::Avx2) {
    detail::energy_map_avx2(vert_mu, label_mu, two_var, log_sigma, discord, beta, out, n);
    return;
  }
#endif
  detail::energy_map_scalar(vert_mu, label_mu, two_var, log_sigma, discord, beta, out, n);
}

std::uint32_t u32_exclusive_scan(const std::uint32_t* in, std::uint32_t carry,
                                 std::uint32_t* out, std::size_t n) {
#if defined(DPMRF_HAVE_AVX2)
  if (active() == Level::Avx2) return detail::u32_exclusive_scan_avx2(in, carry, out, n);
#endif
  return detail::u32_exclusive_scan_scalar(in, carry, out, n);
}

std::uint32_t u32_sum(const std::uint32_t* in, std::size_t n) {
#if defined(DPMRF_HAVE_AVX2)
  if (active() == Level::Avx2) return detail::u32_sum_avx2(in, n);
#endif
  return detail::u32_sum_scalar(in, n);
}

void neq_flags_u32(const std::uint32_t* keys, std::uint32_t prev, std::uint32_t* flags,
                   std::size_t n) {
#if defined(DPMRF_HAVE_AVX2)
  if (active() == Level::Avx2) {
    detail::neq_flags_u32_avx2(keys, prev, flags, n);
    return;
  }
#endif
  detail::neq_flags_u32_scalar(keys, prev, flags, n);
}

void neq_flags_u64(const std::uint64_t* keys, std::uint64_t prev, std::uint32_t* flags,
                   std::size_t n) {
#if defined(DPMRF_HAVE_AVX2)
  if (active() == Level::Avx2) {
    detail::neq_flags_u64_avx2(keys, prev, flags, n);
    return;
  }
#endif
  detail::neq_flags_u64_scalar(keys, prev, flags, n);
}

void confusion_u8(const std::uint8_t* pred, const std::uint8_t* truth, std::size_t n,
                  std::uint64_t counts[4]) {
#if defined(DPMRF_HAVE_AVX2)
  if (active() == Level::Avx2) {
    detail::confusion_u8_avx2(pred, truth, n, counts);
    return;
  }
#endif
  detail::confusion_u8_scalar(pred, truth, n, counts);
}

}  // namespace dpmrf::simd
