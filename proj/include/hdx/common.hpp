#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hdx {

using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using i128 = __int128;

/// Integer power with overflow check (throws on overflow).
inline u64 ipow(u64 base, unsigned exp) {
    u64 acc = 1;
    while (exp--) {
        if (base != 0 && acc > UINT64_MAX / base)
            throw std::overflow_error("ipow: overflow");
        acc *= base;
    }
    return acc;
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Deterministic 64-bit mix (splitmix64 finalizer).
inline u64 mix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Small deterministic RNG. Streams derived from (seed, stream_id) are
/// independent regardless of thread scheduling, which keeps every seeded
/// experiment reproducible for any --threads value.
class Rng {
public:
    explicit Rng(u64 seed) : state_(mix64(seed ^ 0x853c49e6748fea9bULL)) {}
    Rng(u64 seed, u64 stream) : state_(mix64(mix64(seed) ^ mix64(stream * 0xda3e39cb94b95bdbULL + 1))) {}

    u64 next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        u64 z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n), n > 0. Rejection sampling, no modulo bias.
    u64 below(u64 n) {
        u64 threshold = (0 - n) % n;
        for (;;) {
            u64 x = next();
            if (x >= threshold) return x % n;
        }
    }

    double unit() { return (next() >> 11) * (1.0 / 9007199254740992.0); }

private:
    u64 state_;
};

inline unsigned hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

/// Chunked parallel loop. The chunk grid depends only on `n`, never on the
/// thread count, so per-chunk outputs (and any in-order combine) are
/// deterministic for any number of workers.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    if (threads <= 1 || n < 2) {
        body(0, n);
        return;
    }
    std::size_t chunks = std::min<std::size_t>(n, 4 * threads);
    std::size_t chunk_size = (n + chunks - 1) / chunks;
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    while (next < n) {
        std::size_t hi = std::min(n, next + chunk_size);
        ranges.emplace_back(next, hi);
        next = hi;
    }
    std::size_t per = (ranges.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * per, hi = std::min(ranges.size(), lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t c = lo; c < hi; ++c) body(ranges[c].first, ranges[c].second);
        });
    }
    for (auto& th : pool) th.join();
}

struct hash_pair_u32 {
    std::size_t operator()(const std::pair<u32, u32>& p) const {
        return mix64((u64(p.first) << 32) | p.second);
    }
};

} // namespace hdx
