#include "unitriwalk/events.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>

#include "unitriwalk/fp.hpp"

namespace utw {

static void validate_params(int n, std::uint32_t q, double T) {
    if (n < 2) throw InvalidArgument("walk requires n >= 2");
    require_prime(q);
    if (!(T >= 0.0)) throw InvalidArgument("horizon T must be >= 0");
}

void sample_event_log_into(EventLog& log, int n, std::uint32_t q, double T, std::uint64_t seed) {
    validate_params(n, q, T);
    log.n = n;
    log.q = q;
    log.T = T;
    log.seed = seed;
    log.events.clear();
    CounterRng rng{CounterRng::mix(seed + CounterRng::kGamma), 0};
    const double rate = static_cast<double>(n - 1);
    double t = 0.0;
    for (;;) {
        t += rng.next_exp(rate);
        if (t > T) break;
        const int clock = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n - 1)));
        const auto scalar = static_cast<std::uint8_t>(rng.next_below(q));
        log.events.push_back(Event{t, clock, scalar});
    }
}

EventLog sample_event_log(int n, std::uint32_t q, double T, std::uint64_t seed) {
    EventLog log;
    sample_event_log_into(log, n, q, T, seed);
    return log;
}

std::string EventLog::to_tsv() const {
    char buf[128];
    std::string out;
    std::snprintf(buf, sizeof buf, "%d %u %.17g %" PRIu64 "\n", n, q, T, seed);
    out += buf;
    for (const auto& e : events) {
        std::snprintf(buf, sizeof buf, "%.17g\t%d\t%u\n", e.time, e.clock, static_cast<unsigned>(e.scalar));
        out += buf;
    }
    return out;
}

EventLog EventLog::from_tsv(std::string_view text) {
    EventLog log;
    std::size_t pos = 0;
    auto next_line = [&](std::string& line) -> bool {
        if (pos >= text.size()) return false;
        const std::size_t nl = text.find('\n', pos);
        const std::size_t end = (nl == std::string_view::npos) ? text.size() : nl;
        line.assign(text.substr(pos, end - pos));
        pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
        return true;
    };

    std::string line;
    if (!next_line(line)) throw IoError("event log: missing header");
    unsigned q_in = 0;
    if (std::sscanf(line.c_str(), "%d %u %lg %" SCNu64, &log.n, &q_in, &log.T, &log.seed) != 4) {
        throw IoError("event log: bad header '" + line + "'");
    }
    log.q = q_in;
    validate_params(log.n, log.q, log.T);

    double prev = 0.0;
    while (next_line(line)) {
        if (line.empty()) continue;
        double t;
        int clock;
        unsigned scalar;
        if (std::sscanf(line.c_str(), "%lg\t%d\t%u", &t, &clock, &scalar) != 3) {
            throw IoError("event log: bad event line '" + line + "'");
        }
        if (!(t > prev) || t > log.T) throw IoError("event log: times must be strictly increasing in (0, T]");
        if (clock < 1 || clock > log.n - 1) throw IoError("event log: clock out of range");
        if (scalar >= log.q) throw IoError("event log: scalar out of range");
        log.events.push_back(Event{t, clock, static_cast<std::uint8_t>(scalar)});
        prev = t;
    }
    return log;
}

SplitLog split(const EventLog& log) {
    SplitLog s{log.n, log.q, log.T, {}, {}};
    for (const auto& e : log.events) {
        if (e.clock == log.n - 1) {
            s.last_events.push_back(e);
        } else {
            s.f_events.push_back(e);
        }
    }
    return s;
}

} // namespace utw
