#ifndef RLPN_PARALLEL_HPP
#define RLPN_PARALLEL_HPP

#include <cstdint>
#include <thread>
#include <vector>

namespace rlpn {

// Runs fn(begin, end) over disjoint chunks of [0, n). Chunking depends only
// on n, never on the worker count, so any fn writing to index-addressed
// output is worker-count invariant.
template <typename Fn>
void parallel_for(uint64_t n, int threads, Fn&& fn) {
    if (n == 0) return;
    if (threads < 1) threads = 1;
    uint64_t nthreads = std::min<uint64_t>(uint64_t(threads), n);
    if (nthreads <= 1) {
        fn(uint64_t(0), n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(size_t(nthreads));
    uint64_t chunk = (n + nthreads - 1) / nthreads;
    for (uint64_t t = 0; t < nthreads; t++) {
        uint64_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// chunk_count(n, threads) disjoint chunks; fn also receives the chunk
// ordinal (0-based), e.g. to address a per-worker accumulator.
inline uint64_t chunk_count(uint64_t n, int threads) {
    if (n == 0) return 0;
    if (threads < 1) threads = 1;
    return std::min<uint64_t>(uint64_t(threads), n);
}

template <typename Fn>
void parallel_for_indexed(uint64_t n, int threads, Fn&& fn) {
    uint64_t nthreads = chunk_count(n, threads);
    if (nthreads == 0) return;
    if (nthreads == 1) {
        fn(uint64_t(0), uint64_t(0), n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(size_t(nthreads));
    uint64_t chunk = (n + nthreads - 1) / nthreads;
    for (uint64_t t = 0; t < nthreads; t++) {
        uint64_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, t, lo, hi] { fn(t, lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace rlpn

#endif
