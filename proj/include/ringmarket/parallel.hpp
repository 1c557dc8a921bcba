#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace ringmarket {

/// 0 or "auto" means hardware concurrency (at least 1).
inline unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Run fn(i) for i in [0, count) over a fixed contiguous partition of the
/// index space. Each index is visited exactly once and tasks must not share
/// mutable state, so results are identical for any thread count. fn must not
/// throw; record failures into per-index slots instead.
template <typename Fn>
inline void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
    const unsigned n = resolve_thread_count(threads);
    if (n <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(n, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = count * w / workers;
        const std::size_t hi = count * (w + 1) / workers;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace ringmarket
