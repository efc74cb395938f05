#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace semnet {

// Fixed pool of workers running index-addressed jobs. Callers must write
// results into task-indexed slots so the schedule cannot influence output;
// with that discipline results are identical for any worker count.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t n_threads = 0) {
    if (n_threads == 0) {
      n_threads = std::thread::hardware_concurrency();
      if (n_threads == 0) n_threads = 1;
    }
    n_workers_ = n_threads;
    if (n_threads < 2) return;  // single-worker pools run jobs inline
    for (std::size_t w = 0; w < n_threads; ++w)
      threads_.emplace_back([this, w] { worker_loop(w); });
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::size_t n_workers() const { return n_workers_; }

  // blocks until fn(worker, task) has run for every task in [0, n_tasks);
  // fn must not throw
  void run(std::size_t n_tasks, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n_tasks == 0) return;
    if (threads_.empty()) {
      for (std::size_t i = 0; i < n_tasks; ++i) fn(0, i);
      return;
    }
    std::unique_lock<std::mutex> lock(mu_);
    fn_ = &fn;
    n_tasks_ = n_tasks;
    next_task_ = 0;
    busy_ = n_workers_;
    ++generation_;
    wake_.notify_all();
    done_.wait(lock, [this] { return busy_ == 0; });
    fn_ = nullptr;
  }

 private:
  void worker_loop(std::size_t worker) {
    std::uint64_t seen = 0;
    std::unique_lock<std::mutex> lock(mu_);
    while (true) {
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      const auto* fn = fn_;
      while (next_task_ < n_tasks_) {
        std::size_t task = next_task_++;
        lock.unlock();
        (*fn)(worker, task);
        lock.lock();
      }
      if (--busy_ == 0) done_.notify_one();
    }
  }

  std::vector<std::thread> threads_;
  std::size_t n_workers_ = 1;
  std::mutex mu_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t, std::size_t)>* fn_ = nullptr;
  std::size_t n_tasks_ = 0;
  std::size_t next_task_ = 0;
  std::size_t busy_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace semnet
