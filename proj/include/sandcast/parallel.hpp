#ifndef SANDCAST_PARALLEL_HPP
#define SANDCAST_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace sandcast {

/// Runs fn(i) for i in [0, n) on up to `threads` workers over fixed
/// contiguous chunks. Each index must write only its own outputs, so the
/// result is identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads < 1) threads = 1;
    const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), n ? n : 1);
    if (nw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nw);
    const std::size_t chunk = (n + nw - 1) / nw;
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

} // namespace sandcast

#endif
