#pragma once

#include <cmath>
#include <cstdint>

namespace utw {

// Counter-based generator: output k of a stream is mix(key + k*GAMMA), the
// splitmix64 construction. Streams are keyed by (seed, domain, index) so
// Monte-Carlo batches can be sharded by index and merged in any order.
// Seed 0 is reserved for test fixtures.
struct CounterRng {
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    std::uint64_t key = 0;
    std::uint64_t ctr = 0;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
        std::uint64_t k = mix(seed + kGamma);
        k = mix(k ^ (domain * 0xbf58476d1ce4e5b9ULL));
        k = mix(k ^ (index * 0x94d049bb133111ebULL));
        return k;
    }

    static CounterRng stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
        return CounterRng{derive_key(seed, domain, index), 0};
    }

    std::uint64_t next() { return mix(key + (++ctr) * kGamma); }

    // [0,1) with 53 random bits
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // unbiased uniform draw in [0, m)
    std::uint32_t next_below(std::uint32_t m) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
        std::uint64_t r = next();
        while (r >= limit) r = next();
        return static_cast<std::uint32_t>(r % m);
    }

    // Exp(rate); uses -log(1-u) so u=0 is safe
    double next_exp(double rate) { return -std::log1p(-next_unit()) / rate; }
};

// Stream domains. Keep stable: result reproducibility depends on them.
enum RngDomain : std::uint64_t {
    DOM_WALK = 1,     // event-log sampling batches
    DOM_SPAN = 3,     // span-failure estimation batches
    DOM_CERT = 4,     // certificate levels (index = level*2^40 + trajectory)
    DOM_LOWER = 5,    // lower-bound statistic batches
    DOM_LEZAUD = 6,   // occupation-tail batches
    DOM_DISCRETE = 7, // discrete lazy walk
    DOM_TMIX = 8,     // tmix_search evaluation schedule
    DOM_LANCZOS = 9,  // fixed Lanczos start vectors
    DOM_TEST = 99,    // test fixtures
};

} // namespace utw
