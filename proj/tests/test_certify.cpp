#include "doctest.h"

#include <cmath>

#include "json.hpp"

#include "unitriwalk/certify.hpp"
#include "unitriwalk/east.hpp"

using namespace utw;

TEST_CASE("span event detection") {
    SUBCASE("n = 2: spanned iff any last-row ring") {
        EventLog none{2, 2, 1.0, 0, {}};
        const SpanRecord r0 = span_event_check(split(none));
        CHECK_FALSE(r0.spanned);
        CHECK(r0.final_rank == 0);
        CHECK(r0.rank_path.empty());

        for (int rep = 0; rep < 200; ++rep) {
            const EventLog log = sample_event_log(2, 2, 1.0, CounterRng::derive_key(0, DOM_TEST, 40000 + rep));
            const SpanRecord r = span_event_check(split(log));
            CHECK(r.spanned == !log.events.empty());
            if (r.spanned) CHECK(r.first_span_time == log.events.front().time);
        }
    }

    SUBCASE("hand-built n = 3 log spans at the second last-row event") {
        // f-events at 0.4 and 0.8 make Y_{T-s_1} e_2 = e_2 (two cancelling
        // factors, q = 2) and Y_{T-s_2} e_2 = e_1 + e_2 (one factor)
        EventLog log{3, 2, 1.0, 0,
                     {Event{0.2, 2, 1}, Event{0.4, 1, 1}, Event{0.6, 2, 1}, Event{0.8, 1, 1}}};
        const SplitLog s = split(log);
        const BackwardPath back(s);
        const auto& cols = back.last_event_columns();
        REQUIRE(cols.size() == 2);
        CHECK(cols[0] == FieldVector::basis(3, 2, 2));
        FieldVector e12(3, 2);
        e12.set(1, 1);
        e12.set(2, 1);
        CHECK(cols[1] == e12);

        const SpanRecord r = span_event_check(s);
        CHECK(r.spanned);
        CHECK(r.final_rank == 2);
        CHECK(r.first_span_time == 0.6);
        REQUIRE(r.rank_path.size() == 2);
        CHECK(r.rank_path[0] == std::pair<double, int>{0.2, 1});
        CHECK(r.rank_path[1] == std::pair<double, int>{0.6, 2});
    }

    SUBCASE("backward columns always have zero in coordinate n") {
        CounterRng rng = CounterRng::stream(0, DOM_TEST, 41);
        for (int rep = 0; rep < 30; ++rep) {
            const int n = 3 + static_cast<int>(rng.next_below(4));
            const std::uint32_t q = (rep % 2) ? 3 : 2;
            const BackwardPath back(split(sample_event_log(n, q, 5.0, rng.next())));
            for (const auto& col : back.last_event_columns()) {
                CHECK(col.at(n) == 0);
                CHECK(col.at(n - 1) == 1); // unitriangular diagonal
            }
        }
    }

    SUBCASE("fast kernel agrees with the full record; record invariants hold") {
        CounterRng rng = CounterRng::stream(0, DOM_TEST, 42);
        for (std::uint32_t q : {2u, 3u, 5u}) {
            for (int rep = 0; rep < 150; ++rep) {
                const int n = 2 + static_cast<int>(rng.next_below(6));
                const double T = 0.5 + 4.0 * rng.next_unit();
                const EventLog log = sample_event_log(n, q, T, rng.next());
                const SpanRecord rec = span_event_check(split(log));
                CHECK(span_check_fast(log) == rec.spanned);
                CHECK(rec.spanned == (rec.final_rank == n - 1));
                int prev = 0;
                for (const auto& [time, rank] : rec.rank_path) {
                    CHECK(rank >= prev);
                    CHECK(rank <= n - 1);
                    prev = rank;
                }
                if (rec.spanned) {
                    REQUIRE(!rec.rank_path.empty());
                    CHECK(rec.first_span_time == rec.rank_path.back().first);
                }
            }
        }
    }

    SUBCASE("span is monotone under horizon extension") {
        CounterRng rng = CounterRng::stream(0, DOM_TEST, 43);
        int spanned_short = 0;
        for (int rep = 0; rep < 300; ++rep) {
            const std::uint64_t seed = rng.next();
            const EventLog shortlog = sample_event_log(3, 2, 4.0, seed);
            const EventLog longlog = sample_event_log(3, 2, 8.0, seed);
            const bool s1 = span_check_fast(shortlog);
            const bool s2 = span_check_fast(longlog);
            if (s1) {
                ++spanned_short;
                CHECK(s2);
            }
        }
        CHECK(spanned_short > 20); // the check must have bitten
    }

    SUBCASE("dual route: spanned iff no b is orthogonal to every collected vector") {
        CounterRng rng = CounterRng::stream(0, DOM_TEST, 47);
        for (std::uint32_t q : {2u, 3u}) {
            for (int rep = 0; rep < 60; ++rep) {
                const int n = 3 + static_cast<int>(rng.next_below(3));
                const EventLog log = sample_event_log(n, q, 4.0 + 4.0 * rng.next_unit(), rng.next());
                const SplitLog s = split(log);

                std::size_t lines = 1;
                for (int d = 0; d < n - 1; ++d) lines *= q;
                bool all_hit = true;
                for (std::size_t code = 1; code < lines && all_hit; ++code) {
                    FieldVector b(n, q);
                    std::size_t rem = code;
                    for (int i = 1; i <= n - 1; ++i) {
                        b.set(i, static_cast<std::uint32_t>(rem % q));
                        rem /= q;
                    }
                    int lead = 0;
                    for (int i = 1; i <= n; ++i) {
                        if (b.at(i)) { lead = i; break; }
                    }
                    if (b.at(lead) != 1) continue; // one representative per line
                    const ZTrajectory z = inner_chain(b, s);
                    bool hit = false;
                    for (const auto& ev : s.last_events) {
                        const auto st = z.path.state_at(log.T - ev.time);
                        if (st[static_cast<std::size_t>(n - 2)] != 0) { hit = true; break; }
                    }
                    all_hit = all_hit && hit;
                }
                CHECK(span_check_fast(log) == all_hit);
            }
        }
    }
}

TEST_CASE("span failure estimation") {
    SUBCASE("analytic anchor at n = 2") {
        const double T = 2.0;
        const BinomialCI ci = estimate_span_failure(2, 2, T, 20000, 0.99, 1);
        const double expect = std::exp(-T);
        const double sigma = std::sqrt(expect * (1 - expect) / 20000);
        CHECK(std::abs(ci.point - expect) < 3 * sigma);
    }

    SUBCASE("T = 0 always fails") {
        const BinomialCI ci = estimate_span_failure(3, 2, 0.0, 500, 0.95, 1);
        CHECK(ci.point == 1.0);
        CHECK(ci.upper == 1.0);
    }

    SUBCASE("failure estimates shrink with the horizon (CI non-crossing)") {
        const BinomialCI a = estimate_span_failure(3, 2, 2.0, 10000, 0.99, 2);
        const BinomialCI b = estimate_span_failure(3, 2, 4.0, 10000, 0.99, 2);
        CHECK(b.lower <= a.upper);
    }

    SUBCASE("analytic anchor holds for larger fields too") {
        // at n = 2 every collected vector is e_1, so failure is exactly the
        // no-ring event regardless of q
        const BinomialCI ci = estimate_span_failure(2, 5, 1.5, 20000, 0.99, 3);
        const double expect = std::exp(-1.5);
        const double sigma = std::sqrt(expect * (1 - expect) / 20000);
        CHECK(std::abs(ci.point - expect) < 3 * sigma);
    }

    SUBCASE("determinism") {
        const BinomialCI a = estimate_span_failure(4, 3, 3.0, 4000, 0.95, 9);
        const BinomialCI b = estimate_span_failure(4, 3, 3.0, 4000, 0.95, 9);
        CHECK(a.successes == b.successes);
        const CertificateReport ra = certified_tv_upper(4, 2, 6.0, 2, 2000, 0.01, 13);
        const CertificateReport rb = certified_tv_upper(4, 2, 6.0, 2, 2000, 0.01, 13);
        CHECK(ra.bound == rb.bound); // bitwise
    }
}

TEST_CASE("certified TV upper bound") {
    SUBCASE("n = n0 reduces to the exact base") {
        const CertificateReport rep = certified_tv_upper(3, 2, 1.0, 3, 100, 0.01, 1);
        CHECK(rep.levels.empty());
        CHECK(rep.bound == rep.base_tv);
    }

    SUBCASE("large horizon certifies near zero") {
        const CertificateReport rep = certified_tv_upper(3, 2, 50.0, 2, 10000, 0.01, 1);
        REQUIRE(rep.levels.size() == 1);
        CHECK(rep.levels[0].failures == 0);
        CHECK(rep.base_tv < 1e-12);
        CHECK(rep.bound < 1e-3);
    }

    SUBCASE("bound dominates the exact distance") {
        const StateSpace g3 = StateSpace::enumerate(ModelSpec{ModelKind::GroupWalk, 3, 2, 0.5});
        const SparseGenerator gen = build_generator(g3);
        const std::vector<double> pi = stationary_dist(g3);
        std::vector<double> mu0(g3.size(), 0.0);
        mu0[g3.index_of(UnitriMatrix(3, 2))] = 1.0;
        for (double T : {2.0, 5.0}) {
            const double exact = tv_distance(transient_dist(gen, mu0, T), pi);
            const CertificateReport rep = certified_tv_upper(3, 2, T, 2, 10000, 0.01, 3);
            CHECK(rep.bound >= exact);
        }
    }

    SUBCASE("bound decreases with T up to CI noise") {
        const CertificateReport a = certified_tv_upper(4, 2, 4.0, 2, 4000, 0.01, 5);
        const CertificateReport b = certified_tv_upper(4, 2, 8.0, 2, 4000, 0.01, 5);
        double max_width = 0.0;
        for (const auto& rep : {a, b}) {
            for (const auto& lv : rep.levels) {
                max_width = std::max(max_width, lv.ci_upper - static_cast<double>(lv.failures) /
                                                                  static_cast<double>(lv.samples));
            }
        }
        CHECK(b.bound <= a.bound + 2 * max_width);
    }

    SUBCASE("report serializes with the documented schema") {
        const CertificateReport rep = certified_tv_upper(4, 3, 3.0, 2, 500, 0.05, 7);
        const auto j = nlohmann::json::parse(rep.to_json());
        CHECK(j["n"] == 4);
        CHECK(j["q"] == 3);
        CHECK(j["T"] == 3.0);
        CHECK(j["base_n0"] == 2);
        CHECK(j.contains("base_tv"));
        CHECK(j["levels"].size() == 2);
        CHECK(j["levels"][0]["i"] == 3);
        CHECK(j["levels"][0]["samples"] == 500);
        CHECK(j["levels"][0].contains("failures"));
        CHECK(j["levels"][0].contains("ci_upper"));
        CHECK(j.contains("bound"));
        CHECK(j["delta"] == 0.05);
        // assembled bound = base + level uppers
        double sum = j["base_tv"].get<double>();
        for (const auto& lv : j["levels"]) sum += lv["ci_upper"].get<double>();
        CHECK(std::abs(sum - j["bound"].get<double>()) < 1e-12);
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(certified_tv_upper(3, 2, 1.0, 1, 100, 0.01, 1), InvalidArgument);
        CHECK_THROWS_AS(certified_tv_upper(3, 2, 1.0, 4, 100, 0.01, 1), InvalidArgument);
        CHECK_THROWS_AS(certified_tv_upper(3, 2, 1.0, 2, 0, 0.01, 1), InvalidArgument);
        CHECK_THROWS_AS(certified_tv_upper(3, 2, 1.0, 2, 100, 0.0, 1), InvalidArgument);
        // base level too large for the exact cap
        CHECK_THROWS_AS(certified_tv_upper(8, 5, 1.0, 8, 10, 0.01, 1, 1 << 10), CapExceeded);
    }
}

TEST_CASE("distinguishing-statistic lower bound") {
    SUBCASE("T = 0: the statistic is deterministic") {
        const TvLowerBound lb = tv_lower_statistic(4, 2, 0.0, 5000, 1);
        CHECK(lb.certified >= 1.0 - std::pow(2.0, -3) - 0.01);
        CHECK(lb.certified <= 1.0);
        CHECK(lb.threshold == 3);
    }

    SUBCASE("long horizon certifies nothing") {
        const TvLowerBound lb = tv_lower_statistic(3, 2, 100.0, 10000, 2);
        CHECK(lb.certified == 0.0);
    }

    SUBCASE("stationary null: exact binomial draws certify nothing") {
        const int n = 6;
        const std::uint32_t q = 2;
        const std::uint64_t samples = 100000;
        CounterRng rng = CounterRng::stream(0, DOM_TEST, 44);
        std::vector<std::uint64_t> hist(n, 0);
        for (std::uint64_t s = 0; s < samples; ++s) {
            int zeros = 0;
            for (int i = 0; i < n - 1; ++i) zeros += (rng.next_below(q) == 0);
            ++hist[static_cast<std::size_t>(zeros)];
        }
        const TvLowerBound lb = tv_lower_from_histogram(n, q, 1.0, hist, samples, 0.01);
        CHECK(lb.certified == 0.0);
    }

    SUBCASE("matches a full-walk simulation of the column statistic") {
        // cross-check the East shortcut against evolve_forward at small n
        const int n = 4;
        const std::uint32_t q = 2;
        const double T = 2.0;
        const int reps = 40000;
        std::vector<std::uint64_t> walk_hist(n, 0);
        for (int r = 0; r < reps; ++r) {
            const EventLog log = sample_event_log(n, q, T, CounterRng::derive_key(0, DOM_TEST, 45000 + r));
            const UnitriMatrix x = evolve_forward(log);
            int zeros = 0;
            for (int i = 1; i <= n - 1; ++i) zeros += (x.at(i, n) == 0);
            ++walk_hist[static_cast<std::size_t>(zeros)];
        }
        const TvLowerBound via_walk = tv_lower_from_histogram(n, q, T, walk_hist, reps, 0.01);
        const TvLowerBound via_east = tv_lower_statistic(n, q, T, reps, 7, 0.01);
        CHECK(std::abs(via_walk.certified - via_east.certified) < 0.02);
        CHECK(via_walk.certified > 0.05); // T = 2 is far from mixed at n = 4
    }
}

TEST_CASE("occupation fraction") {
    PiecewisePath path;
    path.T = 4.0;
    path.initial = {1, 0};
    path.changes.push_back(ChangePoint{1.0, 2, 1});
    path.changes.push_back(ChangePoint{3.0, 2, 0});
    CHECK(occupation_fraction(path, [](const std::vector<std::uint8_t>&) { return true; }) == 1.0);
    CHECK(occupation_fraction(path, [](const std::vector<std::uint8_t>& h) { return h[1] != 0; }) ==
          doctest::Approx(0.5));

    PiecewisePath empty;
    empty.T = 0.0;
    empty.initial = {1};
    CHECK_THROWS_AS(occupation_fraction(empty, [](const std::vector<std::uint8_t>&) { return true; }),
                    InvalidArgument);

    SUBCASE("change-point integral matches a fine Riemann sum") {
        EastParams params{EastFlavor::QState, 5, 3, 0.5, 6.0};
        const EastTrajectory tr = east_simulate(params, EastState::all_empty(5), 13);
        const auto pred = [](const std::vector<std::uint8_t>& h) { return h[3] != 0; };
        const double exact = occupation_fraction(tr.path, pred);
        double riemann = 0.0;
        const double dt = 1e-4;
        const int steps = static_cast<int>(6.0 / dt);
        for (int k = 0; k < steps; ++k) {
            if (pred(tr.path.state_at(k * dt))) riemann += dt;
        }
        riemann /= 6.0;
        CHECK(std::abs(exact - riemann) < 1e-3);
    }
}

TEST_CASE("occupation tail bound (Lezaud) checks") {
    SUBCASE("binary East, moderate horizon") {
        const LezaudReport rep =
            lezaud_tail_check(ModelSpec{ModelKind::EastBinary, 3, 2, 0.5}, Predicate::site_equals(3, 1),
                              20.0, 0.3, 2000, 1);
        CHECK(rep.pass);
        CHECK(rep.nu == doctest::Approx(0.5));
        CHECK(rep.gap > 0.0);
    }

    SUBCASE("eps >= 1 from a stationary start is vacuous") {
        const LezaudReport rep =
            lezaud_tail_check(ModelSpec{ModelKind::EastBinary, 3, 2, 0.5}, Predicate::site_equals(2, 1),
                              5.0, 1.0, 200, 2);
        CHECK(rep.bound > 1.0);
        CHECK(rep.pass);
        CHECK(rep.empirical.successes == 0); // |occ - t nu| <= t < eps t always
    }

    SUBCASE("matrix identity set on the 3-walk") {
        const LezaudReport rep = lezaud_tail_check(ModelSpec{ModelKind::GroupWalk, 3, 2, 0.5},
                                                   Predicate::matrix_is_identity(), 30.0, 0.2, 2000, 3);
        CHECK(rep.pass);
        CHECK(rep.nu == doctest::Approx(1.0 / 8));
    }

    SUBCASE("a binding configuration still passes") {
        // long horizon, large eps: the bound is far below 1 and the empirical
        // tail is essentially zero
        const LezaudReport rep =
            lezaud_tail_check(ModelSpec{ModelKind::EastQ, 2, 2, 0.5}, Predicate::site_nonzero(2),
                              200.0, 0.45, 2000, 4);
        CHECK(rep.bound < 0.2);
        CHECK(rep.pass);
    }

    SUBCASE("cap applies to the exact side") {
        CHECK_THROWS_AS(lezaud_tail_check(ModelSpec{ModelKind::GroupWalk, 8, 5, 0.5},
                                          Predicate::matrix_is_identity(), 1.0, 0.2, 10, 5, 1 << 16),
                        CapExceeded);
    }
}

TEST_CASE("low-occupation events of the inner chain decay exponentially") {
    // P(occupation fraction of {Z_t(n-1) != 0} <= 1/3) at growing T, compared
    // against q^{n/2} exp(-c lambda* T) with c fitted from the decay itself
    const int n = 4;
    const std::uint32_t q = 2;
    const std::vector<double> horizons = {10.0, 20.0, 40.0};
    const int reps = 4000;

    const auto rows = gap_table(ModelKind::EastQ, q, 0.5, 2, 6);
    double lambda_star = 1e9;
    for (const auto& r : rows) lambda_star = std::min(lambda_star, r.res.gap);
    REQUIRE(lambda_star > 0.0);

    std::vector<double> logp;
    std::vector<double> phat;
    for (double T : horizons) {
        int low = 0;
        for (int r = 0; r < reps; ++r) {
            const SplitLog s = split(sample_event_log(
                n, q, T, CounterRng::derive_key(0, DOM_TEST, 46000 + 100 * static_cast<int>(T) + r)));
            const ZTrajectory z = inner_chain(FieldVector::basis(n, q, 1), s);
            const double frac = occupation_fraction(
                z.path, [n](const std::vector<std::uint8_t>& h) { return h[n - 2] != 0; });
            if (frac <= 1.0 / 3.0) ++low;
        }
        const double p = std::max(static_cast<double>(low), 0.5) / reps;
        phat.push_back(static_cast<double>(low) / reps);
        logp.push_back(std::log(p));
    }

    // least squares slope of log p against lambda* T
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        const double x = lambda_star * horizons[k];
        sx += x;
        sy += logp[k];
        sxx += x * x;
        sxy += x * logp[k];
    }
    const double m = horizons.size();
    const double c_fit = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(c_fit > 0.0); // exponential decay in T

    for (std::size_t k = 0; k < horizons.size(); ++k) {
        const double bound = std::pow(static_cast<double>(q), n / 2.0) *
                             std::exp(-c_fit * lambda_star * horizons[k]);
        const double ci_lo = clopper_pearson(static_cast<std::uint64_t>(phat[k] * reps), reps, 0.99).lower;
        CHECK(ci_lo <= bound);
    }
}

TEST_CASE("lower bound never crosses the certified upper bound") {
    for (double T : {1.0, 4.0, 8.0}) {
        const TvLowerBound lb = tv_lower_statistic(4, 2, T, 20000, 11);
        const CertificateReport ub = certified_tv_upper(4, 2, T, 2, 4000, 0.01, 11);
        CHECK(lb.certified <= ub.bound);
    }
}
