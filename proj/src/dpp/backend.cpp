#include "dpmrf/dpp/backend.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace dpmrf::dpp {

namespace {

// Lazily grown pool shared by all Threaded backends. Work is handed out as
// chunk tickets from an atomic counter; the submitting thread participates,
// so progress never depends on a worker waking up. Jobs are shared_ptr-owned
// so a late-waking worker can never touch freed state.
class ThreadPool {
 public:
  static ThreadPool& instance() {
    static ThreadPool pool;
    return pool;
  }

  ~ThreadPool() {
    {
      std::lock_guard<std::mutex> lk(mutex_);
      stopping_ = true;
      ++generation_;
    }
    wake_.notify_all();
    for (auto& w : workers_) w.join();
  }

  void run(std::size_t num_tasks, unsigned concurrency,
           const std::function<void(std::size_t)>& task) {
    if (num_tasks == 0) return;
    if (concurrency <= 1 || num_tasks == 1 || in_worker_) {
      for (std::size_t t = 0; t < num_tasks; ++t) task(t);
      return;
    }

    std::lock_guard<std::mutex> serialize(submit_mutex_);
    const unsigned helpers =
        std::min<unsigned>(concurrency - 1, static_cast<unsigned>(num_tasks - 1));
    ensure_workers(helpers);

    auto job = std::make_shared<Job>();
    job->task = &task;
    job->total = num_tasks;

    {
      std::lock_guard<std::mutex> lk(mutex_);
      job_ = job;
      ++generation_;
    }
    wake_.notify_all();

    work(*job);  // submitter takes tickets too

    {
      std::unique_lock<std::mutex> lk(mutex_);
      done_.wait(lk, [&] { return job->finished.load(std::memory_order_acquire) == job->total; });
      job_.reset();
    }
    if (job->error) std::rethrow_exception(job->error);
  }

 private:
  struct Job {
    const std::function<void(std::size_t)>* task = nullptr;
    std::size_t total = 0;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> finished{0};
    std::exception_ptr error;
    std::mutex error_mutex;
  };

  static thread_local bool in_worker_;

  void ensure_workers(unsigned wanted) {
    while (workers_.size() < wanted) {
      workers_.emplace_back([this] { worker_loop(); });
    }
  }

  // Claims tickets until the job is drained. Ticket index only selects which
  // chunk a thread runs; outputs are keyed to positions, so assignment order
  // cannot affect results.
  void work(Job& job) {
    while (true) {
      const std::size_t t = job.next.fetch_add(1, std::memory_order_relaxed);
      if (t >= job.total) break;
      try {
        (*job.task)(t);
      } catch (...) {
        std::lock_guard<std::mutex> lk(job.error_mutex);
        if (!job.error) job.error = std::current_exception();
      }
      job.finished.fetch_add(1, std::memory_order_acq_rel);
    }
  }

  void worker_loop() {
    in_worker_ = true;
    std::uint64_t seen = 0;
    while (true) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock<std::mutex> lk(mutex_);
        wake_.wait(lk, [&] { return generation_ != seen || stopping_; });
        if (stopping_) return;
        seen = generation_;
        job = job_;
      }
      if (!job) continue;
      work(*job);
      // Empty critical section: guarantees the submitter is either asleep or
      // will re-check the predicate after our finished increments, so the
      // notify below cannot be lost.
      { std::lock_guard<std::mutex> lk(mutex_); }
      done_.notify_all();
    }
  }

  std::mutex submit_mutex_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::vector<std::thread> workers_;
  std::shared_ptr<Job> job_;
  std::uint64_t generation_ = 0;
  bool stopping_ = false;
};

thread_local bool ThreadPool::in_worker_ = false;

}  // namespace

std::size_t Backend::resolved_chunk(std::size_t n) const {
  if (chunk_size > 0) return chunk_size;
  if (!parallel()) return n == 0 ? 1 : n;
  const std::size_t per_thread = (n + 8 * thread_count - 1) / (8 * thread_count);
  return std::max<std::size_t>(1024, per_thread);
}

void parallel_chunks(const Backend& backend, std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t chunk = backend.resolved_chunk(n);
  const std::size_t num_chunks = (n + chunk - 1) / chunk;
  if (!backend.parallel() || num_chunks == 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) {
      const std::size_t begin = c * chunk;
      fn(begin, std::min(n, begin + chunk));
    }
    return;
  }
  ThreadPool::instance().run(num_chunks, backend.thread_count, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    fn(begin, std::min(n, begin + chunk));
  });
}

}  // namespace dpmrf::dpp
