#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace acs {

/// Thread count resolution: explicit request > ACS_THREADS env var >
/// hardware concurrency. Always at least 1.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ACS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run body(i) for i in [0, count) across up to `threads` workers.
/// Work items must be independent; any reduction over their outputs
/// belongs in a fixed-order loop afterwards so results do not depend
/// on the thread count.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    threads = resolve_threads(threads);
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    int n = threads < static_cast<int>(count) ? threads : static_cast<int>(count);
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace acs
