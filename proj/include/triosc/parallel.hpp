#pragma once

// Bounded worker pool for batch sweeps. Work is split into fixed contiguous
// chunks and every item writes to its own output slot, so results do not
// depend on the thread count or scheduling.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace triosc {

inline unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 8u);
}

// Calls fn(i) for i in [0, n). With threads <= 1 runs inline.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const unsigned workers = std::min<std::size_t>(std::max(threads, 1u), n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// Reduction-friendly variant: each worker receives its slot index and its
// contiguous item range and accumulates into its own partial; callers merge
// the partials in slot order so the combined result is thread-count
// independent whenever each per-item contribution is (max / count / min-index
// style reductions).
inline void parallel_chunks(
    std::size_t n, unsigned threads,
    const std::function<void(unsigned worker, std::size_t begin, std::size_t end)>& fn,
    unsigned* workers_out = nullptr) {
    if (n == 0) {
        if (workers_out) *workers_out = 0;
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), n));
    if (workers_out) *workers_out = workers;
    if (workers == 1) {
        fn(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([w, begin, end, &fn] { fn(w, begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace triosc
