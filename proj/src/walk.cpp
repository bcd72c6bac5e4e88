#include "unitriwalk/walk.hpp"

#include <algorithm>

namespace utw {

UnitriMatrix evolve_forward(const EventLog& log, double t) {
    UnitriMatrix x(log.n, log.q);
    for (const auto& e : log.events) {
        if (e.time > t) break;
        x.row_update(e.clock, e.scalar);
    }
    return x;
}

UnitriMatrix evolve_forward(const EventLog& log) { return evolve_forward(log, log.T); }

BitRowMatrix evolve_forward_bits(const EventLog& log) {
    if (log.q != 2) throw InvalidArgument("bit-packed walk requires q = 2");
    BitRowMatrix x(log.n);
    for (const auto& e : log.events) x.row_update(e.clock, e.scalar);
    return x;
}

BackwardPath::BackwardPath(SplitLog split) : split_(std::move(split)) {
    const int n = split_.n;
    const std::size_t j_count = split_.last_events.size();
    columns_.assign(j_count, FieldVector(n, split_.q));

    UnitriMatrix p(n, split_.q);
    auto f_it = split_.f_events.rbegin();
    auto l_it = split_.last_events.rbegin();
    std::size_t k = j_count;
    // sweep backwards in forward time; on a tie the last event is recorded
    // first so v_k only sees f-events strictly after s_k
    while (l_it != split_.last_events.rend()) {
        while (f_it != split_.f_events.rend() && f_it->time > l_it->time) {
            p.col_update(f_it->clock, f_it->scalar);
            ++f_it;
        }
        columns_[--k] = p.column(n - 1);
        ++l_it;
    }
}

UnitriMatrix BackwardPath::at(double t) const { return evolve_backward(split_, t); }

UnitriMatrix BackwardPath::between(double t, double tp) const {
    if (!(0.0 <= t && t <= tp && tp <= split_.T)) {
        throw InvalidArgument("BackwardPath::between requires 0 <= t <= t' <= T");
    }
    UnitriMatrix p(split_.n, split_.q);
    const double hi = split_.T - t;  // include events with time <= hi
    const double lo = split_.T - tp; // exclude events with time <= lo
    for (auto it = split_.f_events.rbegin(); it != split_.f_events.rend(); ++it) {
        if (it->time > hi) continue;
        if (it->time <= lo) break;
        p.col_update(it->clock, it->scalar);
    }
    return p;
}

UnitriMatrix evolve_backward(const SplitLog& split, double t) {
    if (!(0.0 <= t && t <= split.T)) throw InvalidArgument("evolve_backward requires 0 <= t <= T");
    UnitriMatrix p(split.n, split.q);
    const double cutoff = split.T - t; // f-events with time > cutoff, latest first
    for (auto it = split.f_events.rbegin(); it != split.f_events.rend(); ++it) {
        if (it->time <= cutoff) break;
        p.col_update(it->clock, it->scalar);
    }
    return p;
}

UnitriMatrix expansion_reconstruct(const SplitLog& split) {
    const int n = split.n;
    BackwardPath back(split);

    FpMatrix m = evolve_backward(split, split.T).mat();
    const auto& cols = back.last_event_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::uint32_t a = split.last_events[k].scalar;
        if (a == 0) continue;
        for (int i = 1; i <= n - 1; ++i) {
            m.set(i, n, m.at(i, n) + a * cols[k].at(i));
        }
    }
    return UnitriMatrix::from_matrix(m);
}

std::vector<std::uint8_t> PiecewisePath::state_at(double t) const {
    std::vector<std::uint8_t> s = initial;
    for (const auto& c : changes) {
        if (c.time > t) break;
        s[static_cast<std::size_t>(c.site) - 1] = c.value;
    }
    return s;
}

ZTrajectory inner_chain(const FieldVector& b, const SplitLog& split) {
    const int n = split.n;
    if (b.length() != n) throw InvalidArgument("inner_chain: b must have length n");
    if (b.q != split.q) throw InvalidArgument("inner_chain: modulus mismatch");
    if (b.is_zero()) throw InvalidArgument("inner_chain: b must be nonzero");
    if (b.at(n) != 0) throw InvalidArgument("inner_chain: b_n must be 0");

    int lead = 0;
    for (int i = 1; i <= n; ++i) {
        if (b.at(i) != 0) { lead = i; break; }
    }
    FieldVector z = b;
    if (z.at(lead) != 1) {
        const std::uint32_t scale = inv_mod(z.at(lead), z.q);
        for (int i = 1; i <= n; ++i) z.set(i, z.at(i) * scale);
    }

    ZTrajectory traj;
    traj.b = z;
    traj.lead = lead;
    traj.path.T = split.T;
    traj.path.initial = z.v;
    // f-events reversed in time drive Z: position i+1 += a * position i
    for (auto it = split.f_events.rbegin(); it != split.f_events.rend(); ++it) {
        const int i = it->clock;
        const std::uint32_t a = it->scalar;
        const std::uint32_t delta = (a * z.at(i)) % z.q;
        if (delta == 0) continue;
        z.set(i + 1, z.at(i + 1) + delta);
        traj.path.changes.push_back(ChangePoint{split.T - it->time, i + 1, z.at(i + 1)});
    }
    return traj;
}

UnitriMatrix simulate_discrete_lazy(int n, std::uint32_t q, std::uint64_t steps, std::uint64_t seed) {
    if (n < 2) throw InvalidArgument("walk requires n >= 2");
    require_prime(q);
    auto rng = CounterRng::stream(seed, DOM_DISCRETE, 0);
    UnitriMatrix x(n, q);
    for (std::uint64_t s = 0; s < steps; ++s) {
        const int i = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n - 1)));
        const std::uint32_t a = rng.next_below(q);
        x.row_update(i, a);
    }
    return x;
}

BitRowMatrix simulate_discrete_lazy_bits(int n, std::uint64_t steps, std::uint64_t seed) {
    if (n < 2) throw InvalidArgument("walk requires n >= 2");
    auto rng = CounterRng::stream(seed, DOM_DISCRETE, 0);
    BitRowMatrix x(n);
    for (std::uint64_t s = 0; s < steps; ++s) {
        const int i = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n - 1)));
        const std::uint32_t a = rng.next_below(2);
        x.row_update(i, a);
    }
    return x;
}

} // namespace utw
