#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace minsurf::par {

// MINSURF_THREADS caps worker count; defaults to the hardware concurrency.
inline int max_threads() {
    if (const char* env = std::getenv("MINSURF_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)hw : 1;
}

// Runs f(i) for i in [0,n); each index is handled exactly once and results
// must be written to per-index slots, which keeps output deterministic.
template <class F>
void parallel_for(int n, F&& f) {
    int workers = std::min(max_threads(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) f(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace minsurf::par
