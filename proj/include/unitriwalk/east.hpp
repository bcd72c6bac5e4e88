#pragma once

#include <cstdint>
#include <string>

#include "unitriwalk/rng.hpp"
#include "unitriwalk/walk.hpp"

namespace utw {

enum class EastFlavor { Binary, QState };

struct EastParams {
    EastFlavor flavor = EastFlavor::Binary;
    int n = 2;
    std::uint32_t q = 2; // QState
    double p = 0.5;      // Binary, in (0,1)
    double T = 0.0;

    void validate() const;
};

// Configuration h_1..h_n with h_1 pinned (1 for both flavors).
struct EastState {
    int n = 1;
    std::vector<std::uint8_t> h;

    static EastState all_empty(int n);             // (1, 0, ..., 0)
    std::uint8_t at(int i) const { return h[static_cast<std::size_t>(i) - 1]; }
    void set(int i, std::uint32_t v) { h[static_cast<std::size_t>(i) - 1] = static_cast<std::uint8_t>(v); }

    bool operator==(const EastState&) const = default;
};

// Clock i fired, 1 <= i <= n-1. If site i is active, site i+1 refreshes;
// otherwise nothing happens.
void east_step_binary(EastState& h, int i, bool fill);
void east_step_binary(EastState& h, int i, double u, double p); // fill = (u < p)
void east_step_q(EastState& h, int i, std::uint32_t value, std::uint32_t q);

// Coordinatewise zero/nonzero indicator; maps the q-state model onto the
// binary East model with p = (q-1)/q.
EastState psi_project(const EastState& h);

struct EastTrajectory {
    EastParams params;
    std::uint64_t seed = 0;
    PiecewisePath path;

    EastState state_at(double t) const;
    // dump format: header "flavor n q|p T seed", then "time<TAB>site<TAB>newvalue"
    std::string to_tsv() const;
};

EastTrajectory east_simulate(const EastParams& params, const EastState& initial, std::uint64_t seed);

// Product measure: binary sites 2..n i.i.d. Bernoulli(p), q-state uniform Z_q.
EastState east_stationary_sample(const EastParams& params, CounterRng& rng);

} // namespace utw
