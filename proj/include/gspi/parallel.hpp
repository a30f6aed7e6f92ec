#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gspi {

/// Worker count: GSP_INFECT_THREADS if set (>= 1), else hardware concurrency.
inline unsigned worker_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GSP_INFECT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return std::min<unsigned>(static_cast<unsigned>(v), std::max(hw, 1u) * 4);
    }
    return hw;
}

/// Runs body(i) for i in [0, n). Iterations must be independent; results
/// should be written to per-index slots so ordering never depends on scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = worker_count())
{
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace gspi
