#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "dpmrf/dpp/backend.hpp"
#include "dpmrf/simd/kernels.hpp"

// Data-parallel primitives. Every operation produces a new output and leaves
// its inputs untouched; every operation yields bit-identical results across
// backends, thread counts and chunk sizes.
//
// Floating-point reductions use one fixed combination topology, documented
// here because tests reproduce it as an oracle: the input is cut into leaves
// of kFoldLeafSize elements, each leaf is folded left to right seeded by its
// first element, and leaf partials are combined by a pairwise tree that
// splits at the largest power of two strictly below the partial count.
namespace dpmrf::dpp {

inline constexpr std::size_t kFoldLeafSize = 1024;

namespace detail {

template <class T, class Op>
inline constexpr bool is_u32_plus =
    std::is_same_v<T, std::uint32_t> &&
    (std::is_same_v<std::remove_cvref_t<Op>, std::plus<std::uint32_t>> ||
     std::is_same_v<std::remove_cvref_t<Op>, std::plus<void>>);

template <class T, class Op>
T fold_leaf(const T* first, const T* last, Op& op) {
  T acc = *first;
  for (const T* p = first + 1; p != last; ++p) acc = op(acc, *p);
  return acc;
}

template <class T, class Op>
T fold_tree(const T* partials, std::size_t count, Op& op) {
  if (count == 1) return partials[0];
  const std::size_t split = std::bit_floor(count - 1);
  T left = fold_tree(partials, split, op);
  T right = fold_tree(partials + split, count - split, op);
  return op(left, right);
}

// Fixed-topology fold of a nonempty range (serial; reduce() parallelizes
// over the leaves itself so leaf boundaries stay independent of chunking).
template <class T, class Op>
T fold_range(const T* first, std::size_t n, Op& op) {
  if (n <= kFoldLeafSize) return fold_leaf(first, first + n, op);
  const std::size_t leaves = (n + kFoldLeafSize - 1) / kFoldLeafSize;
  std::vector<T> partials(leaves);
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    const std::size_t begin = leaf * kFoldLeafSize;
    partials[leaf] = fold_leaf(first + begin, first + std::min(n, begin + kFoldLeafSize), op);
  }
  return fold_tree(partials.data(), leaves, op);
}

template <class T, class Op>
T identity_fold(const T* first, std::size_t n, Op& op, T identity) {
  if constexpr (is_u32_plus<T, Op>) {
    return static_cast<T>(identity + simd::u32_sum(first, n));
  } else {
    T acc = identity;
    for (std::size_t i = 0; i < n; ++i) acc = op(acc, first[i]);
    return acc;
  }
}

template <class T, class Op>
void exclusive_into(const T* in, T carry, T* out, std::size_t n, Op& op) {
  if constexpr (is_u32_plus<T, Op>) {
    simd::u32_exclusive_scan(in, carry, out, n);
  } else {
    T acc = carry;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = acc;
      acc = op(acc, in[i]);
    }
  }
}

}  // namespace detail

/// Runs f(i) for every i in [0, n). f writes only to slots private to i.
template <class F>
void for_each_index(const Backend& backend, std::size_t n, F f) {
  parallel_chunks(backend, n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) f(i);
  });
}

template <class T, class F>
auto map(const Backend& backend, const std::vector<T>& in, F f) {
  using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
  std::vector<U> out(in.size());
  parallel_chunks(backend, in.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = f(in[i]);
  });
  return out;
}

template <class F>
auto map_indexed(const Backend& backend, std::size_t n, F f) {
  using U = std::decay_t<std::invoke_result_t<F&, std::size_t>>;
  std::vector<U> out(n);
  parallel_chunks(backend, n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = f(i);
  });
  return out;
}

/// Fold with the fixed leaf/tree topology. identity is returned for empty
/// input and never otherwise enters the fold. op must be associative up to
/// the documented topology; T must be default-constructible.
template <class T, class Op>
T reduce(const Backend& backend, const std::vector<T>& in, Op op, T identity) {
  const std::size_t n = in.size();
  if (n == 0) return identity;
  if (n <= kFoldLeafSize) return detail::fold_leaf(in.data(), in.data() + n, op);
  const std::size_t leaves = (n + kFoldLeafSize - 1) / kFoldLeafSize;
  std::vector<T> partials(leaves);
  parallel_chunks(backend, leaves, [&](std::size_t begin, std::size_t end) {
    for (std::size_t leaf = begin; leaf < end; ++leaf) {
      const std::size_t b = leaf * kFoldLeafSize;
      partials[leaf] =
          detail::fold_leaf(in.data() + b, in.data() + std::min(n, b + kFoldLeafSize), op);
    }
  });
  return detail::fold_tree(partials.data(), leaves, op);
}

/// out[0] = identity, out[i] = op(out[i-1], in[i-1]). Integral element types
/// run a chunked two-pass scan (exact, so still bit-identical to the serial
/// recurrence); other types run the recurrence directly on both backends.
template <class T, class Op>
std::vector<T> scan_exclusive(const Backend& backend, const std::vector<T>& in, Op op,
                              T identity) {
  const std::size_t n = in.size();
  std::vector<T> out(n);
  if (n == 0) return out;
  if constexpr (std::is_integral_v<T>) {
    const std::size_t chunk = backend.resolved_chunk(n);
    const std::size_t num_chunks = (n + chunk - 1) / chunk;
    if (backend.parallel() && num_chunks > 1) {
      std::vector<T> carries(num_chunks);
      parallel_chunks(backend, n, [&](std::size_t begin, std::size_t end) {
        carries[begin / chunk] = detail::identity_fold(in.data() + begin, end - begin, op, identity);
      });
      T carry = identity;
      for (std::size_t c = 0; c < num_chunks; ++c) {
        const T next = op(carry, carries[c]);
        carries[c] = carry;
        carry = next;
      }
      parallel_chunks(backend, n, [&](std::size_t begin, std::size_t end) {
        detail::exclusive_into(in.data() + begin, carries[begin / chunk], out.data() + begin,
                               end - begin, op);
      });
      return out;
    }
  }
  detail::exclusive_into(in.data(), identity, out.data(), n, op);
  return out;
}

namespace detail {

// flags[i] = 1 where a new run of equal keys starts (i == 0 or keys differ).
template <class T>
std::vector<std::uint32_t> run_start_flags(const Backend& backend, const std::vector<T>& keys) {
  const std::size_t n = keys.size();
  std::vector<std::uint32_t> flags(n);
  if (n == 0) return flags;
  if constexpr (std::is_same_v<T, std::uint32_t>) {
    parallel_chunks(backend, n, [&](std::size_t begin, std::size_t end) {
      const std::uint32_t prev = begin == 0 ? ~keys[0] : keys[begin - 1];
      simd::neq_flags_u32(keys.data() + begin, prev, flags.data() + begin, end - begin);
    });
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    parallel_chunks(backend, n, [&](std::size_t begin, std::size_t end) {
      const std::uint64_t prev = begin == 0 ? ~keys[0] : keys[begin - 1];
      simd::neq_flags_u64(keys.data() + begin, prev, flags.data() + begin, end - begin);
    });
  } else {
    for_each_index(backend, n, [&](std::size_t i) {
      flags[i] = (i == 0 || !(keys[i] == keys[i - 1])) ? 1u : 0u;
    });
  }
  return flags;
}

}  // namespace detail

/// Removes adjacent duplicates (full dedup requires sorted input).
template <class T>
std::vector<T> unique(const Backend& backend, const std::vector<T>& in) {
  const std::size_t n = in.size();
  if (n == 0) return {};
  const auto flags = detail::run_start_flags(backend, in);
  const auto positions = scan_exclusive(backend, flags, std::plus<std::uint32_t>{}, 0u);
  std::vector<T> out(positions.back() + flags.back());
  for_each_index(backend, n, [&](std::size_t i) {
    if (flags[i]) out[positions[i]] = in[i];
  });
  return out;
}

template <class K, class V>
struct KeyedArrays {
  std::vector<K> keys;
  std::vector<V> values;
};

/// Combines the values of each run of equal adjacent keys (segmented
/// reduction). Per-run folds use the fixed leaf/tree topology on positions
/// relative to the run start.
template <class K, class V, class Op>
KeyedArrays<K, V> reduce_by_key(const Backend& backend, const std::vector<K>& keys,
                                const std::vector<V>& values, Op op) {
  if (keys.size() != values.size()) {
    throw std::invalid_argument("reduce_by_key: keys/values length mismatch");
  }
  const std::size_t n = keys.size();
  if (n == 0) return {};
  const auto flags = detail::run_start_flags(backend, keys);
  const auto positions = scan_exclusive(backend, flags, std::plus<std::uint32_t>{}, 0u);
  const std::size_t num_runs = positions.back() + flags.back();
  std::vector<std::uint32_t> run_start(num_runs);
  for_each_index(backend, n, [&](std::size_t i) {
    if (flags[i]) run_start[positions[i]] = static_cast<std::uint32_t>(i);
  });
  KeyedArrays<K, V> out;
  out.keys.resize(num_runs);
  out.values.resize(num_runs);
  parallel_chunks(backend, num_runs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const std::size_t lo = run_start[r];
      const std::size_t hi = r + 1 < num_runs ? run_start[r + 1] : n;
      out.keys[r] = keys[lo];
      out.values[r] = detail::fold_range(values.data() + lo, hi - lo, op);
    }
  });
  return out;
}

/// Stable sort of values by key. The output is the unique stable ordering,
/// so it is independent of backend, thread count and chunk size.
template <class K, class V, class Compare = std::less<K>>
KeyedArrays<K, V> sort_by_key(const Backend& backend, const std::vector<K>& keys,
                              const std::vector<V>& values, Compare comp = {}) {
  if (keys.size() != values.size()) {
    throw std::invalid_argument("sort_by_key: keys/values length mismatch");
  }
  const std::size_t n = keys.size();
  using Pair = std::pair<K, V>;
  std::vector<Pair> kv(n);
  for_each_index(backend, n, [&](std::size_t i) { kv[i] = {keys[i], values[i]}; });
  const auto pair_comp = [&comp](const Pair& a, const Pair& b) { return comp(a.first, b.first); };

  const std::size_t chunk = backend.resolved_chunk(n);
  const std::size_t num_chunks = n == 0 ? 0 : (n + chunk - 1) / chunk;
  if (!backend.parallel() || num_chunks <= 1) {
    std::stable_sort(kv.begin(), kv.end(), pair_comp);
  } else {
    parallel_chunks(backend, n, [&](std::size_t begin, std::size_t end) {
      std::stable_sort(kv.begin() + begin, kv.begin() + end, pair_comp);
    });
    std::vector<Pair> scratch(n);
    Pair* src = kv.data();
    Pair* dst = scratch.data();
    for (std::size_t width = chunk; width < n; width *= 2) {
      const std::size_t spans = (n + 2 * width - 1) / (2 * width);
      parallel_chunks(backend, spans, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
          const std::size_t lo = s * 2 * width;
          const std::size_t mid = std::min(n, lo + width);
          const std::size_t hi = std::min(n, lo + 2 * width);
          std::merge(src + lo, src + mid, src + mid, src + hi, dst + lo, pair_comp);
        }
      });
      std::swap(src, dst);
    }
    if (src != kv.data()) kv.swap(scratch);
  }

  KeyedArrays<K, V> out;
  out.keys.resize(n);
  out.values.resize(n);
  for_each_index(backend, n, [&](std::size_t i) {
    out.keys[i] = kv[i].first;
    out.values[i] = kv[i].second;
  });
  return out;
}

template <class V>
std::vector<V> gather(const Backend& backend, const std::vector<std::uint32_t>& indices,
                      const std::vector<V>& source) {
  std::vector<V> out(indices.size());
  const std::size_t limit = source.size();
  parallel_chunks(backend, indices.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint32_t idx = indices[i];
      if (idx >= limit) throw std::out_of_range("gather: index out of range");
      out[i] = source[idx];
    }
  });
  return out;
}

/// out[indices[i]] = values[i]; untouched slots keep fill. Destination
/// indices must be in range and pairwise distinct (distinctness is verified
/// in debug builds).
template <class V>
std::vector<V> scatter(const Backend& backend, const std::vector<V>& values,
                       const std::vector<std::uint32_t>& indices, std::size_t out_size,
                       V fill) {
  if (values.size() != indices.size()) {
    throw std::invalid_argument("scatter: values/indices length mismatch");
  }
  std::vector<V> out(out_size, fill);
#ifndef NDEBUG
  std::vector<unsigned char> claimed(out_size, 0);
#endif
  parallel_chunks(backend, indices.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint32_t idx = indices[i];
      if (idx >= out_size) throw std::out_of_range("scatter: index out of range");
#ifndef NDEBUG
      if (std::atomic_ref<unsigned char>(claimed[idx]).exchange(1)) {
        throw std::invalid_argument("scatter: duplicate destination index");
      }
#endif
      out[idx] = values[i];
    }
  });
  return out;
}

/// CSR-style offsets (n+1 entries) from per-slot counts: an exclusive scan
/// with the total appended.
inline std::vector<std::uint32_t> offsets_from_counts(const Backend& backend,
                                                      const std::vector<std::uint32_t>& counts) {
  auto offsets = scan_exclusive(backend, counts, std::plus<std::uint32_t>{}, 0u);
  const std::uint32_t total = counts.empty() ? 0u : offsets.back() + counts.back();
  offsets.push_back(total);
  return offsets;
}

}  // namespace dpmrf::dpp
