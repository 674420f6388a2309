#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace hrc {

// Runs fn(i) for i in [0, count) across up to `threads` workers (0 = all
// hardware threads) in fixed contiguous chunks. Results must not depend on
// scheduling; callers keep per-index or per-chunk state.
inline void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (threads == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    const int workers = std::min(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int lo = static_cast<int>(static_cast<long long>(count) * w / workers);
        const int hi = static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace hrc
