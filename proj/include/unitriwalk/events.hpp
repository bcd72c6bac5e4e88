#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unitriwalk/rng.hpp"
#include "unitriwalk/errors.hpp"

namespace utw {

// One Poisson clock ring: which clock (1..n-1) and the uniform scalar a in Z_q.
struct Event {
    double time;
    int clock;
    std::uint8_t scalar;

    bool operator==(const Event&) const = default;
};

// Full ring record of a trajectory on [0, T], times strictly increasing.
// Reproducible from (n, q, T, seed).
struct EventLog {
    int n = 2;
    std::uint32_t q = 2;
    double T = 0.0;
    std::uint64_t seed = 0;
    std::vector<Event> events;

    // replay/debug format: header "n q T seed", then "time<TAB>clock<TAB>scalar"
    std::string to_tsv() const;
    static EventLog from_tsv(std::string_view text);
};

// Superposition sampler: global Exp(n-1) interarrivals, uniform clock index,
// uniform scalar in Z_q (0 included, kept in the log). Extending T with the
// same seed extends the same event sequence.
EventLog sample_event_log(int n, std::uint32_t q, double T, std::uint64_t seed);

// Same sampler, reusing the log's event storage (hot Monte-Carlo loops).
void sample_event_log_into(EventLog& log, int n, std::uint32_t q, double T, std::uint64_t seed);

// Clocks split at i = n-1: f_events generate the backward process, last_events
// are the row-n additions whose scalars enter the final-column expansion.
struct SplitLog {
    int n = 2;
    std::uint32_t q = 2;
    double T = 0.0;
    std::vector<Event> f_events;    // clock <= n-2
    std::vector<Event> last_events; // clock == n-1
};

SplitLog split(const EventLog& log);

} // namespace utw
