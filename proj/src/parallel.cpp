#include "yaglom/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <vector>

namespace yaglom::par {

namespace {

class WorkerPool {
 public:
  ~WorkerPool() { resize(0); }

  void resize(int workers) {
    std::unique_lock lk(control_);
    shutdown();
    stop_ = false;
    for (int i = 0; i < workers; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  // Runs job() on all workers plus the calling thread; returns when every
  // participant has drained the shared work queue.
  void run(const std::function<void()>& job) {
    std::unique_lock lk(control_);
    if (threads_.empty()) {
      job();
      return;
    }
    {
      std::lock_guard g(m_);
      job_ = &job;
      pending_ = static_cast<int>(threads_.size());
      ++epoch_;
    }
    cv_.notify_all();
    job();
    std::unique_lock g(m_);
    done_cv_.wait(g, [this] { return pending_ == 0; });
    job_ = nullptr;
  }

 private:
  void shutdown() {
    {
      std::lock_guard g(m_);
      stop_ = true;
      ++epoch_;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
    threads_.clear();
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void()>* job = nullptr;
      {
        std::unique_lock g(m_);
        cv_.wait(g, [&] { return stop_ || epoch_ != seen; });
        seen = epoch_;
        if (stop_) return;
        job = job_;
      }
      if (job) (*job)();
      {
        std::lock_guard g(m_);
        if (--pending_ == 0) done_cv_.notify_all();
      }
    }
  }

  std::mutex control_;
  std::mutex m_;
  std::condition_variable cv_, done_cv_;
  std::vector<std::thread> threads_;
  const std::function<void()>* job_ = nullptr;
  int pending_ = 0;
  bool stop_ = false;
  std::uint64_t epoch_ = 0;
};

WorkerPool& pool() {
  static WorkerPool p;
  return p;
}

std::atomic<int> g_threads{1};

constexpr std::size_t kSumBlock = 8192;

}  // namespace

int thread_count() { return g_threads.load(); }

void set_thread_count(int n) {
  if (n < 1) n = 1;
  if (n == g_threads.load()) return;
  g_threads.store(n);
  pool().resize(n - 1);
}

void parallel_blocks(std::size_t n, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (block_size == 0) block_size = 1;
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  if (thread_count() <= 1 || nblocks <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) {
      fn(b * block_size, std::min(n, (b + 1) * block_size));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  pool().run([&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) break;
      fn(b * block_size, std::min(n, (b + 1) * block_size));
    }
  });
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  parallel_blocks(n, 1 << 15, fn);
}

double deterministic_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(nblocks, 0.0);
  parallel_blocks(n, kSumBlock, [&](std::size_t b0, std::size_t b1) {
    double s = 0.0;
    for (std::size_t i = b0; i < b1; ++i) s += v[i];
    partial[b0 / kSumBlock] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double deterministic_mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return deterministic_sum(v) / static_cast<double>(v.size());
}

}  // namespace yaglom::par
