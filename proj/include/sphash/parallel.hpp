#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace sphash {

inline unsigned effective_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Splits [0, n) into contiguous chunks, one worker thread per chunk.
// fn(begin, end) must be safe to run concurrently on disjoint ranges.
template <typename Fn>
void parallel_for(size_t n, unsigned threads, Fn&& fn) {
    threads = effective_threads(threads);
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        fn(size_t(0), n);
        return;
    }
    size_t n_chunks = std::min<size_t>(threads, n);
    size_t chunk = (n + n_chunks - 1) / n_chunks;
    std::vector<std::thread> pool;
    pool.reserve(n_chunks);
    for (size_t c = 0; c < n_chunks; ++c) {
        size_t begin = c * chunk;
        size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace sphash
