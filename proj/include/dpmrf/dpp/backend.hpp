#pragma once

#include <cstddef>
#include <functional>

namespace dpmrf::dpp {

enum class BackendKind { Serial, Threaded };

/// Execution descriptor for the kernel layer.
///
/// Serial and Threaded runs of every kernel produce bit-identical outputs:
/// combination topologies are keyed to element positions, never to thread
/// assignment. The backend only decides which worker executes a range, so
/// thread count and chunk size can be tuned freely without changing results.
struct Backend {
  BackendKind kind = BackendKind::Serial;
  unsigned thread_count = 1;   ///< workers used when kind == Threaded
  std::size_t chunk_size = 0;  ///< elements per task; 0 picks a size from n

  static Backend serial() { return {}; }

  static Backend threaded(unsigned threads, std::size_t chunk = 0) {
    Backend b;
    b.kind = BackendKind::Threaded;
    b.thread_count = threads == 0 ? 1u : threads;
    b.chunk_size = chunk;
    return b;
  }

  bool parallel() const { return kind == BackendKind::Threaded && thread_count > 1; }

  /// Chunk size used for an input of n elements.
  std::size_t resolved_chunk(std::size_t n) const;
};

/// Runs fn(begin, end) over contiguous chunks covering [0, n). Chunks are
/// fixed by (n, chunk size) alone; under a Threaded backend they are claimed
/// by workers in ticket order. fn must only touch state private to its range.
void parallel_chunks(const Backend& backend, std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace dpmrf::dpp
