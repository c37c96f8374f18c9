#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace levyx {

inline int worker_count_from_env() {
    if (const char* env = std::getenv("LEVYX_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(i) for i in [0,n) across workers.  Results must be written to
// per-index storage; reductions stay with the caller so output ordering is
// deterministic.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int nw = std::min<std::size_t>(worker_count_from_env(), n == 0 ? 1 : n);
    if (nw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

} // namespace levyx
