#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace schw {

/// Worker threads for grid sweeps: SCHW_THREADS when set (>= 1), otherwise
/// the hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("SCHW_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return static_cast<unsigned>(n);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) over contiguous blocks. fn must only write
/// to slots owned by index i; results are therefore independent of the
/// thread count. The first exception (lowest block) is rethrown after join.
/// Each worker receives at least `grain` indices.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t grain = 256) {
    const std::size_t workers =
        std::min<std::size_t>(worker_count(), std::max<std::size_t>(n / std::max<std::size_t>(grain, 1), 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * block, hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &failure = failures[w]] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
}

} // namespace schw
