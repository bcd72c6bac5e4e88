// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. An optional argv[1] selects a single criterion by number.

#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "unitriwalk/harness.hpp"
#include "unitriwalk/parallel.hpp"

using namespace utw;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

// 1. evolve_forward == expansion_reconstruct, exact field equality
void criterion_decomposition() {
    std::uint64_t checked = 0, bad = 0;
    for (std::uint32_t q : {2u, 3u, 5u}) {
        for (int n = 3; n <= 8; ++n) {
            for (int rep = 0; rep < 1000; ++rep) {
                const std::uint64_t seed = CounterRng::derive_key(
                    1, DOM_TEST, (static_cast<std::uint64_t>(q) << 32) | static_cast<std::uint64_t>(n * 10000 + rep));
                const EventLog log = sample_event_log(n, q, 10.0, seed);
                if (!(expansion_reconstruct(split(log)) == evolve_forward(log))) ++bad;
                ++checked;
            }
        }
    }
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "decomposition exactness: %llu/%llu random logs reconstruct exactly",
                  static_cast<unsigned long long>(checked - bad), static_cast<unsigned long long>(checked));
    report(1, bad == 0, msg);
}

// 2. psi-lumping and column-lumping reproduce the East generators
void criterion_lumping() {
    double worst = 0.0;
    bool ok = true;
    for (std::uint32_t q : {2u, 3u, 5u}) {
        for (int n = 2; n <= 5; ++n) {
            const StateSpace qspace = StateSpace::enumerate(ModelSpec{ModelKind::EastQ, n, q, 0.5});
            const LumpResult lump =
                lump_check(build_generator(qspace), psi_partition(qspace), std::size_t{1} << (n - 1));
            if (!lump.lumpable) { ok = false; continue; }
            const StateSpace bspace =
                StateSpace::enumerate(ModelSpec{ModelKind::EastBinary, n, 2, (q - 1.0) / q});
            const std::vector<double> target = dense_generator(build_generator(bspace));
            for (std::size_t k = 0; k < target.size(); ++k) {
                worst = std::max(worst, std::abs(lump.lumped[k] - target[k]));
            }
        }
    }
    for (std::uint32_t q : {2u, 3u}) {
        for (int n = 2; n <= 4; ++n) {
            const StateSpace walk = StateSpace::enumerate(ModelSpec{ModelKind::GroupWalk, n, q, 0.5});
            const SparseGenerator gen = build_generator(walk);
            for (int j = 1; j <= n; ++j) {
                std::size_t classes = 1;
                for (int d = 1; d < j; ++d) classes *= q;
                const LumpResult lump = lump_check(gen, column_partition(walk, j), classes);
                if (!lump.lumpable) { ok = false; continue; }
                const StateSpace ej = StateSpace::enumerate(ModelSpec{ModelKind::EastQ, j, q, 0.5});
                const std::vector<double> target = dense_generator(build_generator(ej));
                for (std::size_t k = 0; k < target.size(); ++k) {
                    worst = std::max(worst, std::abs(lump.lumped[k] - target[k]));
                }
            }
        }
    }
    ok = ok && worst <= 1e-12;
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "lumping theorems: psi and column projections match East generators, worst |diff| = %.2e",
                  worst);
    report(2, ok, msg);
}

// 3. stationarity and reversibility residuals below 1e-12
void criterion_stationarity() {
    double worst = 0.0;
    auto check = [&](const ModelSpec& m, std::size_t cap) {
        const StateSpace space = StateSpace::enumerate(m, cap);
        const StationarityReport rep =
            stationarity_residual(build_generator(space), stationary_dist(space));
        worst = std::max({worst, rep.stationarity_residual, rep.reversibility_residual});
    };
    for (int n = 2; n <= 5; ++n) check(ModelSpec{ModelKind::GroupWalk, n, 2, 0.5}, kDefaultCap);
    for (int n = 2; n <= 4; ++n) check(ModelSpec{ModelKind::GroupWalk, n, 3, 0.5}, kDefaultCap);
    check(ModelSpec{ModelKind::GroupWalk, 4, 5, 0.5}, kDefaultCap);
    for (int n = 2; n <= 8; ++n) {
        for (double p : {0.3, 0.5, 0.7}) check(ModelSpec{ModelKind::EastBinary, n, 2, p}, kDefaultCap);
        for (std::uint32_t q : {2u, 3u, 5u}) {
            check(ModelSpec{ModelKind::EastQ, n, q, 0.5}, std::size_t{1} << 17);
        }
    }
    char msg[120];
    std::snprintf(msg, sizeof msg, "stationarity/reversibility: worst residual = %.2e", worst);
    report(3, worst < 1e-12, msg);
}

// 4. Monte-Carlo TV estimates inside exact 99% binomial bands
void criterion_mc_vs_exact() {
    const int n = 3;
    const std::uint32_t q = 2;
    const std::vector<double> times = {0.5, 1.0, 2.0, 4.0, 8.0};
    const std::uint64_t samples = 100000;

    const StateSpace space = StateSpace::enumerate(ModelSpec{ModelKind::GroupWalk, n, q, 0.5});
    const SparseGenerator gen = build_generator(space);
    const std::vector<double> pi = stationary_dist(space);
    std::vector<double> mu0(space.size(), 0.0);
    mu0[space.index_of(UnitriMatrix(n, q))] = 1.0;

    std::vector<std::vector<char>> in_a(times.size(), std::vector<char>(space.size(), 0));
    std::vector<double> p_star(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const std::vector<double> mu = transient_dist(gen, mu0, times[k]);
        for (std::size_t x = 0; x < space.size(); ++x) {
            if (mu[x] > pi[x]) {
                in_a[k][x] = 1;
                p_star[k] += mu[x];
            }
        }
    }

    const std::uint64_t chunks = (samples + kParallelChunk - 1) / kParallelChunk;
    std::vector<std::vector<std::uint64_t>> hits(chunks, std::vector<std::uint64_t>(times.size(), 0));
    parallel_chunks(samples, [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        EventLog log;
        for (std::uint64_t t = b; t < e; ++t) {
            sample_event_log_into(log, n, q, times.back(), CounterRng::derive_key(4, DOM_WALK, t));
            UnitriMatrix x(n, q);
            std::size_t ev = 0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                while (ev < log.events.size() && log.events[ev].time <= times[k]) {
                    x.row_update(log.events[ev].clock, log.events[ev].scalar);
                    ++ev;
                }
                if (in_a[k][space.index_of(x)]) ++hits[c][k];
            }
        }
    });

    bool ok = true;
    std::string detail;
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::uint64_t total = 0;
        for (std::uint64_t c = 0; c < chunks; ++c) total += hits[c][k];
        const BinomialCI ci = clopper_pearson(total, samples, 0.99);
        const bool inside = ci.lower <= p_star[k] && p_star[k] <= ci.upper;
        ok = ok && inside;
        if (!inside) detail += " t=" + std::to_string(times[k]);
    }
    report(4, ok,
           "exact-vs-MC consistency: all 5 time points inside 99% exact-binomial bands" + detail);
}

// 5. certificate dominates the exact distance in >= 99 of 100 runs
void criterion_certificate_validity() {
    bool ok = true;
    std::string detail;
    for (int n : {3, 4}) {
        const StateSpace space = StateSpace::enumerate(ModelSpec{ModelKind::GroupWalk, n, 2, 0.5});
        const SparseGenerator gen = build_generator(space);
        const std::vector<double> pi = stationary_dist(space);
        std::vector<double> mu0(space.size(), 0.0);
        mu0[space.index_of(UnitriMatrix(n, 2))] = 1.0;
        for (double T : {2.0, 5.0, 10.0}) {
            const double exact = tv_distance(transient_dist(gen, mu0, T), pi);
            int good = 0;
            for (int runix = 0; runix < 100; ++runix) {
                const std::uint64_t seed = CounterRng::derive_key(
                    5, DOM_TEST, static_cast<std::uint64_t>(n * 1000 + runix) ^
                                     static_cast<std::uint64_t>(T * 16));
                const CertificateReport rep = certified_tv_upper(n, 2, T, 2, 10000, 0.01, seed);
                if (rep.bound >= exact) ++good;
            }
            if (good < 99) {
                ok = false;
                detail += " (n=" + std::to_string(n) + ",T=" + std::to_string(T) + ":" +
                          std::to_string(good) + "/100)";
            }
        }
    }
    report(5, ok, "certificate validity: bound >= exact d_n(T) in >= 99/100 runs per config" + detail);
}

// 6. P(span fails at n=2) matches e^{-T}
void criterion_span_anchor() {
    bool ok = true;
    char msg[200];
    std::string detail;
    for (double T : {1.0, 2.0, 4.0}) {
        const std::uint64_t samples = 100000;
        const BinomialCI ci = estimate_span_failure(2, 2, T, samples, 0.99,
                                                    CounterRng::derive_key(6, DOM_TEST, static_cast<std::uint64_t>(T)));
        const double expect = std::exp(-T);
        const double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(samples));
        if (std::abs(ci.point - expect) >= 3 * sigma) {
            ok = false;
            detail += " T=" + std::to_string(T);
        }
    }
    std::snprintf(msg, sizeof msg, "span-failure analytic anchor: MC within 3 sigma of e^{-T}%s",
                  detail.c_str());
    report(6, ok, msg);
}

// 7. spectral-gap table positive; lambda^q(2) = 1
void criterion_gap_table() {
    bool ok = true;
    double running_inf = 1e9;
    for (std::uint32_t q : {2u, 3u}) {
        const int n_hi = (q == 2) ? 12 : 8;
        const auto rows = gap_table(ModelKind::EastQ, q, 0.5, 2, n_hi, std::size_t{1} << 17);
        for (const auto& r : rows) {
            running_inf = std::min(running_inf, r.res.gap);
            if (!(r.res.gap > 0.0)) ok = false;
            if (r.n == 2 && std::abs(r.res.gap - 1.0) > 1e-10) ok = false;
        }
    }
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "spectral-gap table: all entries positive (q=2 to n=12, q=3 to n=8), gap(2)=1, "
                  "running infimum = %.6f",
                  running_inf);
    report(7, ok && running_inf > 0.0, msg);
}

// 8. certified mixing-time scaling
void criterion_scaling() {
    CertParams cp;
    cp.base_n0 = 2;
    cp.samples = 4000;
    cp.delta = 0.05;
    cp.cap = kDefaultCap;
    const double eps = 1.0 / (2.0 * std::exp(1.0));

    std::vector<ScalingRow> rows;
    double t16_q2 = 0.0;
    for (int n : {4, 8, 16, 32}) {
        cp.seed = CounterRng::derive_key(8, DOM_TMIX, static_cast<std::uint64_t>(n));
        const TmixSearchResult res = tmix_search(n, 2, eps, cp, 0.05, 4096.0);
        rows.push_back(ScalingRow{n, 2, res.t_star});
        if (n == 16) t16_q2 = res.t_star;
        std::printf("       criterion  8 progress: T*(n=%d, q=2) = %.3f (%d certificate evaluations)\n",
                    n, res.t_star, res.evaluations);
        std::fflush(stdout);
    }
    const ScalingFit fit = scaling_fit(rows);
    const bool alpha_ok = fit.alpha >= 0.8 && fit.alpha <= 1.3;

    double ratio_min = 1e18, ratio_max = 0.0;
    for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
        double t_star = t16_q2;
        if (q != 2) {
            cp.seed = CounterRng::derive_key(8, DOM_TMIX, 1000 + q);
            t_star = tmix_search(16, q, eps, cp, 0.05, 4096.0).t_star;
        }
        const double ratio = t_star / (16.0 * std::log(static_cast<double>(q)));
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
        std::printf("       criterion  8 progress: T*(n=16, q=%u) = %.3f, T*/(n log q) = %.3f\n", q,
                    t_star, ratio);
        std::fflush(stdout);
    }
    const bool ratio_ok = ratio_max / ratio_min < 2.5;

    char msg[200];
    std::snprintf(msg, sizeof msg,
                  "mixing scaling: fitted alpha = %.3f in [0.8, 1.3]; T*/(n log q) spread %.2fx < 2.5x",
                  fit.alpha, ratio_max / ratio_min);
    report(8, alpha_ok && ratio_ok, msg);
}

// 9. linear-time lower bound floor and no upper/lower crossing
void criterion_lower_bound() {
    const double eps = 1.0 / (2.0 * std::exp(1.0));
    bool ok = true;
    std::string detail;
    for (int n : {8, 16, 32}) {
        const double T = 0.25 * n;
        const TvLowerBound lb =
            tv_lower_statistic(n, 2, T, 100000, CounterRng::derive_key(9, DOM_TEST, n), 0.01);
        if (!(lb.certified > eps)) {
            ok = false;
            detail += " n=" + std::to_string(n);
        }
        const CertificateReport ub = certified_tv_upper(n, 2, T, 2, 2000, 0.01,
                                                        CounterRng::derive_key(9, DOM_CERT, n));
        if (lb.certified > ub.bound) {
            ok = false;
            detail += " cross@n=" + std::to_string(n);
        }
    }
    // shared grid across the mixing window
    for (double T : {2.0, 6.0, 12.0}) {
        const TvLowerBound lb =
            tv_lower_statistic(8, 2, T, 50000, CounterRng::derive_key(9, DOM_LOWER, static_cast<std::uint64_t>(T)), 0.01);
        const CertificateReport ub = certified_tv_upper(8, 2, T, 2, 4000, 0.01,
                                                        CounterRng::derive_key(9, DOM_CERT, 100 + static_cast<std::uint64_t>(T)));
        if (lb.certified > ub.bound) {
            ok = false;
            detail += " cross@T=" + std::to_string(T);
        }
    }
    report(9, ok, "lower bound floor: d_n(n/4) > 1/(2e) at n in {8,16,32}; never crosses the upper bound" + detail);
}

// 10. occupation-time concentration never beats the bound
void criterion_lezaud() {
    struct Cfg {
        ModelSpec model;
        Predicate pred;
        double t, eps;
    };
    const Cfg cfgs[] = {
        {{ModelKind::EastBinary, 3, 2, 0.5}, Predicate::site_equals(3, 1), 20.0, 0.3},
        {{ModelKind::GroupWalk, 3, 2, 0.5}, Predicate::matrix_is_identity(), 30.0, 0.2},
        {{ModelKind::EastBinary, 3, 2, 0.5}, Predicate::site_equals(2, 1), 5.0, 1.0},
        {{ModelKind::EastQ, 3, 3, 0.5}, Predicate::site_nonzero(3), 20.0, 0.25},
        {{ModelKind::EastBinary, 4, 2, 0.7}, Predicate::site_equals(4, 1), 15.0, 0.3},
        {{ModelKind::EastQ, 2, 2, 0.5}, Predicate::site_nonzero(2), 200.0, 0.45},
    };
    bool ok = true;
    std::string detail;
    int idx = 0;
    for (const auto& c : cfgs) {
        const LezaudReport rep =
            lezaud_tail_check(c.model, c.pred, c.t, c.eps, 10000, CounterRng::derive_key(10, DOM_LEZAUD, idx));
        if (!rep.pass) {
            ok = false;
            detail += " cfg" + std::to_string(idx);
        }
        ++idx;
    }
    report(10, ok, "occupation-time tail bound: 6/6 configurations pass at 10^4 runs each" + detail);
}

} // namespace

int main(int argc, char** argv) {
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    struct Entry {
        int num;
        void (*fn)();
    };
    const Entry entries[] = {
        {1, criterion_decomposition}, {2, criterion_lumping},       {3, criterion_stationarity},
        {4, criterion_mc_vs_exact},   {5, criterion_certificate_validity},
        {6, criterion_span_anchor},   {7, criterion_gap_table},     {8, criterion_scaling},
        {9, criterion_lower_bound},   {10, criterion_lezaud},
    };
    for (const auto& e : entries) {
        if (only == 0 || only == e.num) e.fn();
    }
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
