#pragma once

#include <condition_variable>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pdp {

// Persistent pool running index loops over fixed contiguous slices: slice s
// always covers the same indices for a given (count, workers) pair, and every
// reduction stays on the calling thread, so results do not depend on the
// worker count as long as the per-index work writes only to its own slots.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int workers() const { return workers_; }

  // Calls fn(i) for every i in [0, count). Rethrows the first exception by
  // slice order once all slices finished.
  void parallel_for(int count, const std::function<void(int)>& fn);

 private:
  struct Task {
    const std::function<void(int)>* fn = nullptr;
    int count = 0;
  };

  void worker_loop(int slot);
  static void run_slice(const Task& task, int slice, int slices,
                        std::exception_ptr& error);

  int workers_ = 1;
  std::vector<std::thread> threads_;
  std::vector<std::exception_ptr> errors_;

  std::mutex mu_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  Task task_;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

}  // namespace pdp
