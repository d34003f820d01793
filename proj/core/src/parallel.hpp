#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fgpr::detail {

// Hands out contiguous index ranges [begin, end) covering [0, total) in grains
// of the given size. fn runs concurrently on up to `threads` workers; callers
// must make their accumulation order-independent (integer sums under a mutex).
// The first exception thrown by any worker is rethrown after all join.
inline void parallel_tasks(std::uint64_t total, int threads, std::uint64_t grain,
                           const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
    if (total == 0) return;
    if (grain == 0) grain = 1;
    if (threads < 1) threads = 1;
    if (threads == 1) {
        fn(0, total);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> poisoned{false};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            std::uint64_t begin = next.fetch_add(grain);
            if (begin >= total || poisoned.load(std::memory_order_relaxed)) break;
            std::uint64_t end = begin + grain < total ? begin + grain : total;
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                poisoned.store(true, std::memory_order_relaxed);
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace fgpr::detail
