#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace utw {

// Worker count: min(hardware, UNITRIWALK_THREADS when set and >= 1).
unsigned worker_count();

inline constexpr std::uint64_t kParallelChunk = 1024;

// Runs fn(chunk_index, begin, end) over [0, total) in fixed chunks of
// kParallelChunk. Chunk boundaries do not depend on the worker count, so
// per-chunk accumulation gives results independent of threading.
template <typename Fn>
void parallel_chunks(std::uint64_t total, Fn&& fn) {
    if (total == 0) return;
    const std::uint64_t chunks = (total + kParallelChunk - 1) / kParallelChunk;
    const unsigned workers = std::min<std::uint64_t>(worker_count(), chunks);
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) {
            const std::uint64_t b = c * kParallelChunk;
            fn(c, b, std::min(total, b + kParallelChunk));
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            const std::uint64_t b = c * kParallelChunk;
            fn(c, b, std::min(total, b + kParallelChunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

} // namespace utw
