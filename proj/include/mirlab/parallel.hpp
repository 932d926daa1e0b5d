#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mirlab {

/// Runs job(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by any job is rethrown after all threads finish.
template <class Job>
void parallel_for(Eigen::Index count, int workers, Job&& job) {
    const auto threads = static_cast<int>(std::min<Eigen::Index>(std::max(1, workers), count));
    if (threads <= 1) {
        for (Eigen::Index i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<Eigen::Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (Eigen::Index i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& thread : pool) thread.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace mirlab
