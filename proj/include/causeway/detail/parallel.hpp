#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace causeway::detail {

// Worker budget: explicit value, else CAUSEWAY_THREADS, else 1.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CAUSEWAY_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

// Runs fn(i) for i in [0, count). Work items must be independent; callers
// that need deterministic output collect results by index.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::size_t>(threads, count));
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace causeway::detail
