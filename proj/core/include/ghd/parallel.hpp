#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ghd {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.  Work is handed out
// by an atomic counter, so scheduling is dynamic, but callers must only write
// to per-index slots; with that discipline results are identical for any
// worker count.  The first exception thrown by any worker is rethrown.
inline void parallel_for(std::int64_t n, int workers, const std::function<void(std::int64_t)>& fn) {
    workers = resolve_workers(workers);
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (static_cast<std::int64_t>(workers) > n) workers = static_cast<int>(n);

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            try {
                for (;;) {
                    std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= n || failed.load(std::memory_order_relaxed)) return;
                    fn(i);
                }
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// As parallel_for, but fn also receives the worker index in [0, workers),
// letting callers reuse per-worker scratch buffers.  The effective worker
// count (after resolving 0 and clamping to n) is returned so callers can size
// the scratch pool; call resolve_worker_slots first when allocating up front.
inline int resolve_worker_slots(std::int64_t n, int workers) {
    workers = resolve_workers(workers);
    if (n >= 1 && static_cast<std::int64_t>(workers) > n) workers = static_cast<int>(n);
    return workers < 1 ? 1 : workers;
}

inline void parallel_for_workers(std::int64_t n, int workers,
                                 const std::function<void(int, std::int64_t)>& fn) {
    workers = resolve_worker_slots(n, workers);
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(0, i);
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (;;) {
                    std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= n || failed.load(std::memory_order_relaxed)) return;
                    fn(w, i);
                }
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace ghd
