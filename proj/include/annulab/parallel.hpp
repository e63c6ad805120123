#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace annulab {

// Worker count: ANNULAB_WORKERS env var if set, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("ANNULAB_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs body(i) for i in [0, n). Work is split into contiguous blocks so the
// assignment of indices to threads is deterministic for a given worker count;
// callers that need byte-identical output across worker counts must write
// results into index-addressed slots (as all callers here do).
inline void parallel_for(long n, const std::function<void(long)>& body) {
    int workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    if (workers > n) workers = static_cast<int>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    long chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long lo = w * chunk;
        long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace annulab
