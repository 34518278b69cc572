#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ofdmse {

/// Number of workers to use when the caller passes 0.
inline unsigned default_workers() noexcept { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs body(i) for i in [0, n) on `workers` threads. Work items are claimed
/// dynamically, so body must write only to slots owned by index i. The first
/// exception thrown by any body is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n, std::memory_order_relaxed);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace ofdmse
