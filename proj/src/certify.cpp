#include "unitriwalk/certify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "json.hpp"

#include "unitriwalk/parallel.hpp"
#include "unitriwalk/rank.hpp"

namespace utw {

SpanRecord span_event_check(const SplitLog& split) {
    const int n = split.n;
    SpanRecord rec;
    rec.n = n;
    rec.q = split.q;
    rec.T = split.T;

    const BackwardPath back(split);
    const auto& cols = back.last_event_columns();

    RankBasis basis(n - 1, split.q);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        FieldVector v(n - 1, split.q);
        for (int i = 1; i <= n - 1; ++i) v.set(i, cols[k].at(i));
        basis.insert(v);
        rec.rank_path.emplace_back(split.last_events[k].time, basis.rank());
        if (basis.full()) {
            rec.spanned = true;
            rec.first_span_time = split.last_events[k].time;
            break; // remaining events cannot lose the span
        }
    }
    rec.final_rank = basis.rank();
    return rec;
}

namespace {

// q = 2 kernel: columns as 64-bit words, Gauss elimination on words.
bool span_fast_q2(const std::vector<Event>& events, int n) {
    std::uint64_t cols[64];
    std::uint64_t basis[64] = {0};
    for (int i = 0; i < n; ++i) cols[i] = 1ULL << i;
    const std::uint64_t mask = (1ULL << (n - 1)) - 1; // rows 1..n-1
    int rank = 0;
    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        if (it->clock == n - 1) {
            std::uint64_t v = cols[n - 2] & mask;
            while (v != 0) {
                const int p = std::countr_zero(v);
                if (basis[p]) {
                    v ^= basis[p];
                } else {
                    basis[p] = v;
                    if (++rank == n - 1) return true;
                    break;
                }
            }
        } else if (it->scalar & 1u) {
            cols[it->clock] ^= cols[it->clock - 1];
        }
    }
    return false;
}

// general q: byte columns, normalized row-echelon elimination
struct ByteRank {
    int dim;
    std::uint32_t q;
    std::vector<std::uint8_t> rows; // dim x dim, row r = basis row with pivot r (if present)
    std::vector<std::uint8_t> present;
    int rank = 0;

    ByteRank(int dim, std::uint32_t q) : dim(dim), q(q) {
        rows.assign(static_cast<std::size_t>(dim) * dim, 0);
        present.assign(static_cast<std::size_t>(dim), 0);
    }

    void reset() {
        std::fill(rows.begin(), rows.end(), 0);
        std::fill(present.begin(), present.end(), 0);
        rank = 0;
    }

    // reduces v in place; returns true if rank increased
    bool insert(std::uint8_t* v) {
        for (int p = 0; p < dim; ++p) {
            const std::uint32_t c = v[p];
            if (c == 0) continue;
            if (present[p]) {
                const std::uint8_t* row = &rows[static_cast<std::size_t>(p) * dim];
                const std::uint32_t f = q - c;
                for (int j = p; j < dim; ++j) v[j] = static_cast<std::uint8_t>((v[j] + f * row[j]) % q);
            } else {
                const std::uint32_t s = inv_mod(c, q);
                std::uint8_t* row = &rows[static_cast<std::size_t>(p) * dim];
                for (int j = p; j < dim; ++j) row[j] = static_cast<std::uint8_t>((v[j] * s) % q);
                present[p] = 1;
                ++rank;
                return true;
            }
        }
        return false;
    }
};

bool span_fast_generic(const std::vector<Event>& events, int n, std::uint32_t q, ByteRank& basis,
                       std::vector<std::uint8_t>& colbuf, std::vector<std::uint8_t>& vbuf) {
    basis.reset();
    // col-major identity, n x n
    colbuf.assign(static_cast<std::size_t>(n) * n, 0);
    for (int j = 0; j < n; ++j) colbuf[static_cast<std::size_t>(j) * n + j] = 1;
    vbuf.resize(static_cast<std::size_t>(n - 1));

    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        if (it->clock == n - 1) {
            const std::uint8_t* c = &colbuf[static_cast<std::size_t>(n - 2) * n];
            std::copy(c, c + (n - 1), vbuf.begin());
            if (basis.insert(vbuf.data()) && basis.rank == n - 1) return true;
        } else if (it->scalar != 0) {
            const std::uint8_t* src = &colbuf[static_cast<std::size_t>(it->clock - 1) * n];
            std::uint8_t* dst = &colbuf[static_cast<std::size_t>(it->clock) * n];
            const std::uint32_t a = it->scalar;
            for (int r = 0; r < it->clock; ++r) {
                dst[r] = static_cast<std::uint8_t>((dst[r] + a * src[r]) % q);
            }
        }
    }
    return false;
}

} // namespace

bool span_check_fast(const EventLog& log) {
    if (log.n <= 64 && log.q == 2) return span_fast_q2(log.events, log.n);
    ByteRank basis(log.n - 1, log.q);
    std::vector<std::uint8_t> colbuf, vbuf;
    return span_fast_generic(log.events, log.n, log.q, basis, colbuf, vbuf);
}

namespace {

std::uint64_t count_span_failures(int n, std::uint32_t q, double T, std::uint64_t samples,
                                  std::uint64_t seed, std::uint64_t domain,
                                  std::uint64_t domain_index_base) {
    const std::uint64_t chunks = (samples + kParallelChunk - 1) / kParallelChunk;
    std::vector<std::uint64_t> fails(chunks, 0);
    parallel_chunks(samples, [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        EventLog log;
        ByteRank basis(n - 1, q);
        std::vector<std::uint8_t> colbuf, vbuf;
        std::uint64_t f = 0;
        const bool q2 = (q == 2 && n <= 64);
        for (std::uint64_t t = b; t < e; ++t) {
            const std::uint64_t traj_seed =
                CounterRng::derive_key(seed, domain, domain_index_base + t);
            sample_event_log_into(log, n, q, T, traj_seed);
            const bool spanned = q2 ? span_fast_q2(log.events, n)
                                    : span_fast_generic(log.events, n, q, basis, colbuf, vbuf);
            if (!spanned) ++f;
        }
        fails[c] = f;
    });
    std::uint64_t total = 0;
    for (auto f : fails) total += f;
    return total;
}

} // namespace

BinomialCI estimate_span_failure(int n, std::uint32_t q, double T, std::uint64_t samples,
                                 double confidence, std::uint64_t seed) {
    if (n < 2) throw InvalidArgument("span estimation requires n >= 2");
    require_prime(q);
    if (samples < 1) throw InvalidArgument("samples must be >= 1");
    const std::uint64_t fails =
        count_span_failures(n, q, T, samples, seed, DOM_SPAN, static_cast<std::uint64_t>(n) << 40);
    return clopper_pearson(fails, samples, confidence);
}

std::string CertificateReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["q"] = q;
    j["T"] = T;
    j["base_n0"] = base_n0;
    j["base_tv"] = base_tv;
    j["levels"] = nlohmann::json::array();
    for (const auto& lv : levels) {
        j["levels"].push_back({{"i", lv.i},
                               {"samples", lv.samples},
                               {"failures", lv.failures},
                               {"ci_upper", lv.ci_upper}});
    }
    j["bound"] = bound;
    j["delta"] = delta;
    return j.dump(2);
}

CertificateReport certified_tv_upper(int n, std::uint32_t q, double T, int base_n0,
                                     std::uint64_t samples, double delta, std::uint64_t seed,
                                     std::size_t cap) {
    if (base_n0 < 2 || base_n0 > n) throw InvalidArgument("need 2 <= base_n0 <= n");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must be in (0,1)");
    if (samples < 1) throw InvalidArgument("samples must be >= 1");
    if (!(T >= 0.0)) throw InvalidArgument("T must be >= 0");

    CertificateReport rep;
    rep.n = n;
    rep.q = q;
    rep.T = T;
    rep.base_n0 = base_n0;
    rep.delta = delta;

    const ModelSpec base{ModelKind::GroupWalk, base_n0, q, 0.5};
    const StateSpace space = StateSpace::enumerate(base, cap);
    const SparseGenerator gen = build_generator(space);
    const std::vector<double> pi = stationary_dist(space);
    std::vector<double> mu0(space.size(), 0.0);
    mu0[space.index_of(UnitriMatrix(base_n0, q))] = 1.0;
    rep.base_tv = tv_distance(transient_dist(gen, mu0, T), pi);

    double bound = rep.base_tv;
    const int levels = n - base_n0;
    for (int i = base_n0 + 1; i <= n; ++i) {
        CertLevel lv;
        lv.i = i;
        lv.samples = samples;
        lv.failures = count_span_failures(i, q, T, samples, seed, DOM_CERT,
                                          static_cast<std::uint64_t>(i) << 40);
        lv.ci_upper = clopper_pearson_upper(lv.failures, samples, 1.0 - delta / levels);
        bound += lv.ci_upper;
        rep.levels.push_back(lv);
    }
    rep.bound = bound;
    return rep;
}

namespace {

// Column n of the walk from the identity is the q-state East chain of length
// n read bottom-up (pinned site = the diagonal), so the statistic simulates
// as an East chain started all-empty.
int column_zero_count(int n, std::uint32_t q, double T, std::uint64_t seed,
                      std::vector<std::uint8_t>& h) {
    h.assign(static_cast<std::size_t>(n), 0);
    h[0] = 1;
    CounterRng rng{CounterRng::mix(seed + CounterRng::kGamma), 0};
    const double rate = static_cast<double>(n - 1);
    double t = 0.0;
    for (;;) {
        t += rng.next_exp(rate);
        if (t > T) break;
        const auto i = static_cast<std::size_t>(rng.next_below(static_cast<std::uint32_t>(n - 1)));
        const auto v = static_cast<std::uint8_t>(rng.next_below(q));
        if (h[i] != 0) h[i + 1] = v;
    }
    int zeros = 0;
    for (int i = 1; i < n; ++i) zeros += (h[static_cast<std::size_t>(i)] == 0);
    return zeros;
}

} // namespace

TvLowerBound tv_lower_from_histogram(int n, std::uint32_t q, double T,
                                     const std::vector<std::uint64_t>& hist,
                                     std::uint64_t samples, double delta) {
    if (n < 2) throw InvalidArgument("lower bound requires n >= 2");
    require_prime(q);
    if (samples < 1) throw InvalidArgument("samples must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must be in (0,1)");
    if (hist.size() != static_cast<std::size_t>(n)) throw InvalidArgument("histogram length must be n");

    TvLowerBound out;
    out.n = n;
    out.q = q;
    out.T = T;
    out.samples = samples;
    out.confidence = 1.0 - delta;

    // thresholds {stat >= r : 0 <= r <= n-1}, fixed family, Bonferroni split
    const double level = 1.0 - delta / n;
    std::uint64_t geq = 0;
    for (int r = n - 1; r >= 0; --r) {
        geq += hist[static_cast<std::size_t>(r)];
        const double pi_tail = binom_tail_geq(static_cast<std::uint64_t>(n - 1), 1.0 / q,
                                              static_cast<std::uint64_t>(r));
        const BinomialCI ci = clopper_pearson(geq, samples, level);
        const double cand = std::max(ci.lower - pi_tail, pi_tail - ci.upper);
        if (cand > out.certified) {
            out.certified = cand;
            out.threshold = r;
            out.point = std::abs(ci.point - pi_tail);
        }
    }
    return out;
}

TvLowerBound tv_lower_statistic(int n, std::uint32_t q, double T, std::uint64_t samples,
                                std::uint64_t seed, double delta) {
    if (n < 2) throw InvalidArgument("lower bound requires n >= 2");
    require_prime(q);
    if (samples < 1) throw InvalidArgument("samples must be >= 1");

    const std::uint64_t chunks = (samples + kParallelChunk - 1) / kParallelChunk;
    std::vector<std::vector<std::uint64_t>> hist(chunks, std::vector<std::uint64_t>(n, 0));
    parallel_chunks(samples, [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        std::vector<std::uint8_t> h;
        for (std::uint64_t t = b; t < e; ++t) {
            const std::uint64_t traj_seed = CounterRng::derive_key(seed, DOM_LOWER, t);
            ++hist[c][static_cast<std::size_t>(column_zero_count(n, q, T, traj_seed, h))];
        }
    });
    std::vector<std::uint64_t> counts(n, 0);
    for (const auto& hc : hist) {
        for (int r = 0; r < n; ++r) counts[static_cast<std::size_t>(r)] += hc[static_cast<std::size_t>(r)];
    }
    return tv_lower_from_histogram(n, q, T, counts, samples, delta);
}

double occupation_fraction(const PiecewisePath& path,
                           const std::function<bool(const std::vector<std::uint8_t>&)>& pred) {
    if (!(path.T > 0.0)) throw InvalidArgument("occupation_fraction needs a nonempty horizon");
    std::vector<std::uint8_t> state = path.initial;
    double occ = 0.0;
    double cur = 0.0;
    bool in = pred(state);
    for (const auto& c : path.changes) {
        if (in) occ += c.time - cur;
        cur = c.time;
        state[static_cast<std::size_t>(c.site) - 1] = c.value;
        in = pred(state);
    }
    if (in) occ += path.T - cur;
    return occ / path.T;
}

Predicate Predicate::matrix_is_identity() { return Predicate{Kind::MatrixIsIdentity, 0, 0}; }
Predicate Predicate::site_nonzero(int site) { return Predicate{Kind::SiteNonzero, site, 0}; }
Predicate Predicate::site_equals(int site, std::uint32_t value) {
    return Predicate{Kind::SiteEquals, site, value};
}

bool Predicate::eval_matrix(const UnitriMatrix& x) const {
    if (kind != Kind::MatrixIsIdentity) throw InvalidArgument("predicate does not apply to matrices");
    for (int i = 1; i <= x.n(); ++i) {
        for (int j = i + 1; j <= x.n(); ++j) {
            if (x.at(i, j) != 0) return false;
        }
    }
    return true;
}

bool Predicate::eval_east(const EastState& h) const {
    switch (kind) {
    case Kind::SiteNonzero:
        return h.at(site) != 0;
    case Kind::SiteEquals:
        return h.at(site) == value;
    default:
        throw InvalidArgument("predicate does not apply to East states");
    }
}

bool Predicate::eval_state(const StateSpace& space, std::size_t idx) const {
    if (space.model().kind == ModelKind::GroupWalk) return eval_matrix(space.matrix_at(idx));
    return eval_east(space.east_at(idx));
}

std::string Predicate::name() const {
    switch (kind) {
    case Kind::MatrixIsIdentity:
        return "matrix=I";
    case Kind::SiteNonzero:
        return "h_" + std::to_string(site) + "!=0";
    case Kind::SiteEquals:
        return "h_" + std::to_string(site) + "=" + std::to_string(value);
    }
    return "?";
}

namespace {

double simulate_occupation(const ModelSpec& m, const Predicate& A, double t, CounterRng& rng) {
    double occ = 0.0;
    double cur = 0.0;
    if (m.kind == ModelKind::GroupWalk) {
        UnitriMatrix x(m.n, m.q);
        for (int i = 1; i <= m.n; ++i) {
            for (int j = i + 1; j <= m.n; ++j) x.set_upper(i, j, rng.next_below(m.q));
        }
        bool in = A.eval_matrix(x);
        const double rate = static_cast<double>(m.n - 1);
        for (;;) {
            const double next = cur + rng.next_exp(rate);
            if (in) occ += std::min(next, t) - cur;
            if (next > t) break;
            const int i = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(m.n - 1)));
            x.row_update(i, rng.next_below(m.q));
            in = A.eval_matrix(x);
            cur = next;
        }
        return occ;
    }

    EastParams params{m.kind == ModelKind::EastBinary ? EastFlavor::Binary : EastFlavor::QState,
                      m.n, m.q, m.p, t};
    EastState h = east_stationary_sample(params, rng);
    bool in = A.eval_east(h);
    const double rate = static_cast<double>(m.n - 1);
    for (;;) {
        const double next = cur + rng.next_exp(rate);
        if (in) occ += std::min(next, t) - cur;
        if (next > t) break;
        const int i = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(m.n - 1)));
        std::uint8_t v;
        if (params.flavor == EastFlavor::Binary) {
            v = rng.next_unit() < m.p ? 1 : 0;
        } else {
            v = static_cast<std::uint8_t>(rng.next_below(m.q));
        }
        if (h.at(i) != 0) h.set(i + 1, v);
        in = A.eval_east(h);
        cur = next;
    }
    return occ;
}

} // namespace

LezaudReport lezaud_tail_check(const ModelSpec& model, const Predicate& A, double t, double eps,
                               std::uint64_t samples, std::uint64_t seed, std::size_t cap) {
    model.validate();
    if (!(t > 0.0)) throw InvalidArgument("lezaud check needs t > 0");
    if (!(eps > 0.0)) throw InvalidArgument("lezaud check needs eps > 0");
    if (samples < 1) throw InvalidArgument("samples must be >= 1");
    if (model.n < 2) throw InvalidArgument("lezaud check needs n >= 2");

    LezaudReport rep;
    rep.model = model;
    rep.t = t;
    rep.eps = eps;

    const StateSpace space = StateSpace::enumerate(model, cap);
    const SparseGenerator gen = build_generator(space);
    const std::vector<double> pi = stationary_dist(space);
    double nu = 0.0;
    double nu_min = 1.0;
    for (std::size_t x = 0; x < space.size(); ++x) {
        if (A.eval_state(space, x)) nu += pi[x];
        if (pi[x] > 0.0) nu_min = std::min(nu_min, pi[x]);
    }
    rep.nu = nu;
    rep.nu_min = nu_min;
    rep.gap = spectral_gap(gen, pi).gap;
    rep.bound = 2.0 / std::sqrt(nu_min) * std::exp(-t * eps * eps * rep.gap / 12.0);

    const std::uint64_t chunks = (samples + kParallelChunk - 1) / kParallelChunk;
    std::vector<std::uint64_t> exceed(chunks, 0);
    parallel_chunks(samples, [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        std::uint64_t cnt = 0;
        for (std::uint64_t s = b; s < e; ++s) {
            CounterRng rng{CounterRng::derive_key(seed, DOM_LEZAUD, s), 0};
            const double occ = simulate_occupation(model, A, t, rng);
            if (std::abs(occ - t * nu) > eps * t) ++cnt;
        }
        exceed[c] = cnt;
    });
    std::uint64_t total = 0;
    for (auto cnt : exceed) total += cnt;

    rep.empirical = clopper_pearson(total, samples, 0.99);
    rep.pass = rep.empirical.lower <= rep.bound;
    return rep;
}

} // namespace utw
