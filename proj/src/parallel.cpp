#include "pdp/parallel.hpp"

#include <algorithm>

namespace pdp {

WorkerPool::WorkerPool(int workers) : workers_(std::max(1, workers)) {
  errors_.resize(workers_);
  threads_.reserve(workers_ - 1);
  for (int slot = 1; slot < workers_; ++slot) {
    threads_.emplace_back([this, slot] { worker_loop(slot); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (std::thread& t : threads_) t.join();
}

void WorkerPool::run_slice(const Task& task, int slice, int slices,
                           std::exception_ptr& error) {
  const int per = (task.count + slices - 1) / slices;
  const int begin = slice * per;
  const int end = std::min(task.count, begin + per);
  try {
    for (int i = begin; i < end; ++i) (*task.fn)(i);
  } catch (...) {
    error = std::current_exception();
  }
}

void WorkerPool::worker_loop(int slot) {
  std::uint64_t seen = 0;
  while (true) {
    Task task;
    {
      std::unique_lock<std::mutex> lock(mu_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      task = task_;
    }
    run_slice(task, slot, workers_, errors_[slot]);
    {
      std::lock_guard<std::mutex> lock(mu_);
      --pending_;
    }
    done_cv_.notify_one();
  }
}

void WorkerPool::parallel_for(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (workers_ == 1 || count == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  for (auto& e : errors_) e = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu_);
    task_ = Task{&fn, count};
    pending_ = workers_ - 1;
    ++generation_;
  }
  start_cv_.notify_all();
  run_slice(task_, 0, workers_, errors_[0]);
  {
    std::unique_lock<std::mutex> lock(mu_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
  }
  for (auto& e : errors_) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace pdp
