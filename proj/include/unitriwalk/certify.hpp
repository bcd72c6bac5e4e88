#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "unitriwalk/analysis.hpp"
#include "unitriwalk/stats.hpp"
#include "unitriwalk/walk.hpp"

namespace utw {

// Span event for one trajectory: do the vectors Y_{T-s_k} e_{n-1} span
// Z_q^{n-1}? Rank is tracked in increasing k with early stop once full.
struct SpanRecord {
    int n = 2;
    std::uint32_t q = 2;
    double T = 0.0;
    bool spanned = false;
    double first_span_time = -1.0; // s_k at which rank first reached n-1
    int final_rank = 0;
    std::vector<std::pair<double, int>> rank_path; // (s_k, rank after insert)
};

SpanRecord span_event_check(const SplitLog& split);

// Lean kernel used by the Monte-Carlo estimators: spanned or not, nothing
// else. Bit-packed columns for q = 2, byte columns otherwise; agrees with
// span_event_check on every log.
bool span_check_fast(const EventLog& log);

// Exact binomial CI on P(span fails) from independent trajectories.
BinomialCI estimate_span_failure(int n, std::uint32_t q, double T, std::uint64_t samples,
                                 double confidence, std::uint64_t seed);

struct CertLevel {
    int i = 0;
    std::uint64_t samples = 0;
    std::uint64_t failures = 0;
    double ci_upper = 1.0;
};

// d_n(T) <= d_{n0}(T) + sum_{i>n0} P(span fails at level i), with the exact
// base term and one-sided Clopper-Pearson uppers at confidence
// 1 - delta/(n - n0), so the whole bound holds with probability >= 1 - delta.
struct CertificateReport {
    int n = 2;
    std::uint32_t q = 2;
    double T = 0.0;
    int base_n0 = 2;
    double base_tv = 0.0;
    std::vector<CertLevel> levels;
    double bound = 0.0;
    double delta = 0.0;

    std::string to_json() const;
};

CertificateReport certified_tv_upper(int n, std::uint32_t q, double T, int base_n0,
                                     std::uint64_t samples, double delta, std::uint64_t seed,
                                     std::size_t cap = kDefaultCap);

// Distinguishing-statistic lower bound on d_n(T): the number of zero entries
// in the strictly-upper part of column n is Binomial(n-1, 1/q) under the
// stationary law; the threshold family {stat >= r} is fixed up front and the
// confidence budget is split over it.
struct TvLowerBound {
    int n = 2;
    std::uint32_t q = 2;
    double T = 0.0;
    std::uint64_t samples = 0;
    double confidence = 0.0;
    int threshold = 0;      // best r
    double point = 0.0;     // |phat - pi_tail| at the best threshold
    double certified = 0.0; // valid lower bound on d_n(T), floored at 0
};

TvLowerBound tv_lower_statistic(int n, std::uint32_t q, double T, std::uint64_t samples,
                                std::uint64_t seed, double delta = 0.01);

// Threshold scan over a precomputed histogram of the zero-count statistic
// (index = count, 0..n-1); lets null checks inject exact stationary draws.
TvLowerBound tv_lower_from_histogram(int n, std::uint32_t q, double T,
                                     const std::vector<std::uint64_t>& hist,
                                     std::uint64_t samples, double delta);

// (1/T) * integral of I(pred(state)) dt, exact from change-points.
double occupation_fraction(const PiecewisePath& path,
                           const std::function<bool(const std::vector<std::uint8_t>&)>& pred);

// Named predicates usable on enumerated states and on simulated trajectories.
struct Predicate {
    enum class Kind { MatrixIsIdentity, SiteNonzero, SiteEquals };
    Kind kind = Kind::MatrixIsIdentity;
    int site = 0;
    std::uint32_t value = 0;

    static Predicate matrix_is_identity();
    static Predicate site_nonzero(int site);
    static Predicate site_equals(int site, std::uint32_t value);

    bool eval_matrix(const UnitriMatrix& x) const;
    bool eval_east(const EastState& h) const;
    bool eval_state(const StateSpace& space, std::size_t idx) const;
    std::string name() const;
};

// Occupation-time concentration check against the continuous-time Chernoff
// bound (2/sqrt(nu_min)) exp(-t eps^2 gap / 12), stationary start.
struct LezaudReport {
    ModelSpec model;
    double t = 0.0;
    double eps = 0.0;
    double nu = 0.0;
    double nu_min = 0.0;
    double gap = 0.0;
    double bound = 0.0;
    BinomialCI empirical; // P(|occupation - t nu| > eps t)
    bool pass = false;
};

LezaudReport lezaud_tail_check(const ModelSpec& model, const Predicate& A, double t, double eps,
                               std::uint64_t samples, std::uint64_t seed,
                               std::size_t cap = kDefaultCap);

} // namespace utw
