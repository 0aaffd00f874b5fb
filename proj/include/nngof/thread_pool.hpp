#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nngof {

// Run fn(job) for every job in [0, n_jobs) on up to n_threads workers.
//
// Jobs are handed out through an atomic counter; each job writes only to its
// own output slot, so results are identical for any thread count. The first
// exception thrown by a job is rethrown on the caller.
inline void parallel_for(std::size_t n_jobs, unsigned n_threads,
                         const std::function<void(std::size_t)>& fn) {
    if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
    if (n_threads <= 1 || n_jobs <= 1) {
        for (std::size_t i = 0; i < n_jobs; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= n_jobs) return;
            try {
                fn(job);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    const unsigned spawned = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, n_jobs));
    threads.reserve(spawned);
    for (unsigned t = 0; t < spawned; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace nngof
