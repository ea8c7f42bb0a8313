#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace tsim {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)hw : 1;
}

// Calls fn(i) for i in [0, count). Work is handed out in index order; callers
// write into per-index slots so the merge does not depend on scheduling.
template <class F>
void parallel_for(size_t count, int threads, F&& fn) {
    threads = std::max(1, std::min<int>(resolve_threads(threads), (int)std::min<size_t>(count, 1024)));
    if (threads <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        try {
            for (size_t i; (i = next.fetch_add(1)) < count;) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!err) err = std::current_exception();
            next = count;
        }
    };
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream for item idx of a run seeded with seed.
inline std::mt19937_64 item_rng(uint64_t seed, uint64_t idx) {
    std::seed_seq seq{uint32_t(seed), uint32_t(seed >> 32), uint32_t(idx), uint32_t(idx >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace tsim
