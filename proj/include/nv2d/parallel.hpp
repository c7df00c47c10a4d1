#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nv2d {

inline int worker_count() {
    if (const char* env = std::getenv("NV2D_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static split of [begin, end) over worker threads. Bodies must write to
// disjoint outputs; results are then independent of the thread count.
template <class Fn>
void parallel_for(int begin, int end, Fn&& fn) {
    const int n = end - begin;
    if (n <= 0) return;
    const int workers = std::min(worker_count(), n);
    if (workers <= 1 || n < 4) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int lo = begin + static_cast<int>(static_cast<long>(n) * w / workers);
        const int hi = begin + static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace nv2d
