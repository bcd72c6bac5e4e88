#pragma once

#include <cstdint>
#include <vector>

#include "unitriwalk/events.hpp"
#include "unitriwalk/matrix.hpp"

namespace utw {

// X_t from the identity: apply row_update(clock, scalar) at each event time.
UnitriMatrix evolve_forward(const EventLog& log);
UnitriMatrix evolve_forward(const EventLog& log, double t); // events with time <= t

// Bit-packed q=2 variant; consumes the same log, must agree entrywise.
BitRowMatrix evolve_forward_bits(const EventLog& log);

// Backward column process over the f-events of a split log:
//   Y_t = W_{N(T)} ... W_{N(T-t)+1}, Y_0 = I,
// realized by column updates (add column i times a to column i+1).
class BackwardPath {
public:
    explicit BackwardPath(SplitLog split);

    const SplitLog& log() const { return split_; }

    UnitriMatrix at(double t) const;                    // Y_t, 0 <= t <= T
    UnitriMatrix between(double t, double tp) const;    // Y_{t,t'}, t <= t'

    // v_k = Y_{T-s_k} e_{n-1} for k = 1..J(T), one reverse sweep, O(events * n).
    // These are the final-column contributions: Y_{T-s_k} E_{n-1,n} has v_k as
    // its column n and zeros elsewhere.
    const std::vector<FieldVector>& last_event_columns() const { return columns_; }

private:
    SplitLog split_;
    std::vector<FieldVector> columns_;
};

UnitriMatrix evolve_backward(const SplitLog& split, double t);

// Y_T + sum_k a_k Y_{T-s_k} E_{n-1,n}; equals evolve_forward on the full log.
UnitriMatrix expansion_reconstruct(const SplitLog& split);

// Piecewise-constant vector path stored as change-points.
struct ChangePoint {
    double time;
    int site;           // 1-based coordinate that changed
    std::uint8_t value; // new value
};

struct PiecewisePath {
    double T = 0.0;
    std::vector<std::uint8_t> initial;
    std::vector<ChangePoint> changes; // ascending time, actual changes only

    std::vector<std::uint8_t> state_at(double t) const;
};

// Z_t = b . Y_t. Coordinates below the leading index, the leading index
// itself, and coordinate n never move; the window lead..n-1 runs a q-state
// East chain of length n-lead.
struct ZTrajectory {
    FieldVector b; // normalized so the leading entry is 1
    int lead = 1;  // index of the first nonzero entry of b
    PiecewisePath path;
};

ZTrajectory inner_chain(const FieldVector& b, const SplitLog& split);

// Discrete chain: each step picks uniform clock i and uniform a in Z_q.
// For q = 2 this is the lazy upper triangular walk.
UnitriMatrix simulate_discrete_lazy(int n, std::uint32_t q, std::uint64_t steps, std::uint64_t seed);
BitRowMatrix simulate_discrete_lazy_bits(int n, std::uint64_t steps, std::uint64_t seed); // q = 2

} // namespace utw
