#include "unitriwalk/east.hpp"

#include <cinttypes>
#include <cstdio>

#include "unitriwalk/fp.hpp"

namespace utw {

void EastParams::validate() const {
    if (n < 1) throw InvalidArgument("East model requires n >= 1");
    if (flavor == EastFlavor::Binary) {
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("binary East requires 0 < p < 1");
    } else {
        require_prime(q);
    }
    if (!(T >= 0.0)) throw InvalidArgument("horizon T must be >= 0");
}

EastState EastState::all_empty(int n) {
    if (n < 1) throw InvalidArgument("East state requires n >= 1");
    EastState s;
    s.n = n;
    s.h.assign(static_cast<std::size_t>(n), 0);
    s.h[0] = 1;
    return s;
}

static void check_clock(const EastState& h, int i) {
    if (i < 1 || i > h.n - 1) throw InvalidArgument("East clock index out of range");
}

void east_step_binary(EastState& h, int i, bool fill) {
    check_clock(h, i);
    if (h.at(i) == 1) h.set(i + 1, fill ? 1 : 0);
}

void east_step_binary(EastState& h, int i, double u, double p) {
    east_step_binary(h, i, u < p);
}

void east_step_q(EastState& h, int i, std::uint32_t value, std::uint32_t q) {
    check_clock(h, i);
    if (value >= q) throw InvalidArgument("East refresh value out of range");
    if (h.at(i) != 0) h.set(i + 1, value);
}

EastState psi_project(const EastState& h) {
    EastState out = h;
    for (int i = 1; i <= h.n; ++i) out.set(i, h.at(i) != 0 ? 1 : 0);
    return out;
}

EastState EastTrajectory::state_at(double t) const {
    EastState s;
    s.n = static_cast<int>(path.initial.size());
    s.h = path.state_at(t);
    return s;
}

std::string EastTrajectory::to_tsv() const {
    char buf[128];
    std::string out;
    if (params.flavor == EastFlavor::Binary) {
        std::snprintf(buf, sizeof buf, "binary %d %.17g %.17g %" PRIu64 "\n", params.n, params.p, params.T, seed);
    } else {
        std::snprintf(buf, sizeof buf, "qstate %d %u %.17g %" PRIu64 "\n", params.n, params.q, params.T, seed);
    }
    out += buf;
    for (const auto& c : path.changes) {
        std::snprintf(buf, sizeof buf, "%.17g\t%d\t%u\n", c.time, c.site, static_cast<unsigned>(c.value));
        out += buf;
    }
    return out;
}

EastTrajectory east_simulate(const EastParams& params, const EastState& initial, std::uint64_t seed) {
    params.validate();
    if (initial.n != params.n) throw InvalidArgument("East initial state has wrong length");
    if (initial.at(1) != 1) throw InvalidArgument("East initial state must have h_1 = 1");
    if (params.flavor == EastFlavor::Binary) {
        for (int i = 1; i <= params.n; ++i) {
            if (initial.at(i) > 1) throw InvalidArgument("binary East state must be 0/1");
        }
    } else {
        for (int i = 1; i <= params.n; ++i) {
            if (initial.at(i) >= params.q) throw InvalidArgument("East state entry out of range");
        }
    }

    EastTrajectory traj;
    traj.params = params;
    traj.seed = seed;
    traj.path.T = params.T;
    traj.path.initial = initial.h;

    if (params.n == 1) return traj; // no clocks

    EastState h = initial;
    CounterRng rng{CounterRng::mix(seed + CounterRng::kGamma), 0};
    const double rate = static_cast<double>(params.n - 1);
    double t = 0.0;
    for (;;) {
        t += rng.next_exp(rate);
        if (t > params.T) break;
        const int i = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(params.n - 1)));
        // the refresh draw is consumed whether or not the constraint allows it,
        // so coupled flavors share one event skeleton
        std::uint8_t value;
        if (params.flavor == EastFlavor::Binary) {
            value = rng.next_unit() < params.p ? 1 : 0;
        } else {
            value = static_cast<std::uint8_t>(rng.next_below(params.q));
        }
        if (h.at(i) != 0 && h.at(i + 1) != value) {
            h.set(i + 1, value);
            traj.path.changes.push_back(ChangePoint{t, i + 1, value});
        }
    }
    return traj;
}

EastState east_stationary_sample(const EastParams& params, CounterRng& rng) {
    params.validate();
    EastState s = EastState::all_empty(params.n);
    for (int i = 2; i <= params.n; ++i) {
        if (params.flavor == EastFlavor::Binary) {
            s.set(i, rng.next_unit() < params.p ? 1 : 0);
        } else {
            s.set(i, rng.next_below(params.q));
        }
    }
    return s;
}

} // namespace utw
