#include "unitriwalk/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

#include "unitriwalk/parallel.hpp"

namespace utw {

using nlohmann::json;

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

} // namespace

TmixSearchResult tmix_search(int n, std::uint32_t q, double eps, const CertParams& cp,
                             double rel_tol, double t_cap) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must be in (0,1)");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("rel_tol must be in (0,1)");

    TmixSearchResult res;
    auto eval = [&](double T) {
        const std::uint64_t eval_seed =
            CounterRng::derive_key(cp.seed, DOM_TMIX, static_cast<std::uint64_t>(res.evaluations));
        ++res.evaluations;
        return certified_tv_upper(n, q, T, cp.base_n0, cp.samples, cp.delta, eval_seed, cp.cap).bound;
    };

    double lo = 0.0;
    double bound_lo = std::numeric_limits<double>::infinity();
    double hi = 1.0;
    double bound_hi = eval(hi);
    while (bound_hi > eps) {
        lo = hi;
        bound_lo = bound_hi;
        hi *= 2.0;
        if (hi > t_cap) {
            throw BracketNotFound("tmix_search: certified bound still above eps at T = " +
                                  fmt_double(hi / 2.0) + " (cap " + fmt_double(t_cap) + ")");
        }
        bound_hi = eval(hi);
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        const double b = eval(mid);
        if (b <= eps) {
            hi = mid;
            bound_hi = b;
        } else {
            lo = mid;
            bound_lo = b;
        }
    }
    res.t_star = hi;
    res.bound_at_t_star = bound_hi;
    res.t_low = lo;
    res.bound_at_t_low = bound_lo;
    return res;
}

namespace {

// solve the k x k system a x = b in place, partial pivoting
void solve_small(std::vector<double>& a, std::vector<double>& b, std::size_t k) {
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::abs(a[r * k + col]) > std::abs(a[piv * k + col])) piv = r;
        }
        if (std::abs(a[piv * k + col]) < 1e-12) throw DegenerateFit("degenerate design matrix");
        if (piv != col) {
            for (std::size_t c = 0; c < k; ++c) std::swap(a[col * k + c], a[piv * k + c]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = a[r * k + col] / a[col * k + col];
            for (std::size_t c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t col = k; col-- > 0;) {
        for (std::size_t c = col + 1; c < k; ++c) b[col] -= a[col * k + c] * b[c];
        b[col] /= a[col * k + col];
    }
}

} // namespace

ScalingFit scaling_fit(const std::vector<ScalingRow>& rows) {
    std::set<int> distinct_n;
    std::set<std::uint32_t> distinct_q;
    for (const auto& r : rows) {
        if (!(r.t_star > 0.0)) throw InvalidArgument("scaling_fit: T* must be > 0");
        if (r.n < 2) throw InvalidArgument("scaling_fit: n must be >= 2");
        require_prime(r.q);
        distinct_n.insert(r.n);
        distinct_q.insert(r.q);
    }
    if (distinct_n.size() < 3) throw DegenerateFit("scaling_fit needs >= 3 distinct n values");

    const bool with_beta = distinct_q.size() >= 2;
    const std::size_t k = with_beta ? 3 : 2;
    std::vector<double> xtx(k * k, 0.0), xty(k, 0.0);
    for (const auto& r : rows) {
        double x[3] = {1.0, std::log(static_cast<double>(r.n)),
                       std::log(std::log(static_cast<double>(r.q)))};
        const double y = std::log(r.t_star);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) xtx[i * k + j] += x[i] * x[j];
            xty[i] += x[i] * y;
        }
    }
    solve_small(xtx, xty, k);

    ScalingFit fit;
    fit.c = std::exp(xty[0]);
    fit.alpha = xty[1];
    fit.beta = with_beta ? xty[2] : 0.0;
    fit.beta_fitted = with_beta;
    fit.rows = rows.size();
    for (const auto& r : rows) {
        const double pred = xty[0] + fit.alpha * std::log(static_cast<double>(r.n)) +
                            fit.beta * std::log(std::log(static_cast<double>(r.q)));
        fit.max_residual = std::max(fit.max_residual, std::abs(std::log(r.t_star) - pred));
    }
    return fit;
}

void ExperimentConfig::validate() const {
    static const std::set<std::string> kinds = {"simulate", "exact",   "certify",
                                                "east-gap", "scaling", "lower-bound"};
    if (!kinds.count(kind)) throw InvalidArgument("config field 'kind': unknown kind '" + kind + "'");
    const bool is_east = kind == "east-gap";
    if (n.empty()) throw InvalidArgument("config field 'n': list must be nonempty");
    for (int v : n) {
        if (v < (is_east ? 1 : 2)) throw InvalidArgument("config field 'n': entries must be >= 2");
    }
    if (is_east && flavor == "binary") {
        if (p.empty()) throw InvalidArgument("config field 'p': binary east-gap needs p values");
        for (double v : p) {
            if (!(v > 0.0 && v < 1.0)) throw InvalidArgument("config field 'p': entries must be in (0,1)");
        }
    } else {
        if (q.empty()) throw InvalidArgument("config field 'q': list must be nonempty");
        for (std::uint32_t v : q) {
            if (!is_prime(v)) throw InvalidArgument("config field 'q': entries must be prime");
        }
    }
    if (kind == "simulate" || kind == "certify" || kind == "lower-bound") {
        if (T.empty()) throw InvalidArgument("config field 'T': list must be nonempty");
        for (double t : T) {
            if (!(t >= 0.0)) throw InvalidArgument("config field 'T': entries must be >= 0");
        }
    }
    if (samples < 1) throw InvalidArgument("config field 'samples': must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("config field 'delta': must be in (0,1)");
    if (base_n0 < 2) throw InvalidArgument("config field 'base_n0': must be >= 2");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("config field 'eps': must be in (0,1)");
    if (!(t_cap > 0.0)) throw InvalidArgument("config field 't_cap': must be > 0");
    if (flavor != "qstate" && flavor != "binary") {
        throw InvalidArgument("config field 'flavor': must be 'qstate' or 'binary'");
    }
    if (format != "csv" && format != "json") {
        throw InvalidArgument("config field 'format': must be 'csv' or 'json'");
    }
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["kind"] = kind;
    j["n"] = n;
    j["q"] = q;
    j["p"] = p;
    j["T"] = T;
    j["samples"] = samples;
    j["delta"] = delta;
    j["seed"] = seed;
    j["cap"] = cap;
    j["base_n0"] = base_n0;
    j["eps"] = eps;
    j["t_cap"] = t_cap;
    j["flavor"] = flavor;
    j["out"] = out;
    j["format"] = format;
    j["dump_logs"] = dump_logs;
    j["dump_count"] = dump_count;
    return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    static const std::set<std::string> known = {"kind", "n",    "q",       "p",      "T",
                                                "samples", "delta", "seed",    "cap",    "base_n0",
                                                "eps",     "t_cap", "flavor",  "out",    "format",
                                                "dump_logs", "dump_count"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw InvalidArgument("config field '" + key + "': unknown field");
    }
    try {
        if (j.contains("kind")) cfg.kind = j["kind"].get<std::string>();
        if (j.contains("n")) cfg.n = j["n"].get<std::vector<int>>();
        if (j.contains("q")) cfg.q = j["q"].get<std::vector<std::uint32_t>>();
        if (j.contains("p")) cfg.p = j["p"].get<std::vector<double>>();
        if (j.contains("T")) cfg.T = j["T"].get<std::vector<double>>();
        if (j.contains("samples")) cfg.samples = j["samples"].get<std::uint64_t>();
        if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("cap")) cfg.cap = j["cap"].get<std::size_t>();
        if (j.contains("base_n0")) cfg.base_n0 = j["base_n0"].get<int>();
        if (j.contains("eps")) cfg.eps = j["eps"].get<double>();
        if (j.contains("t_cap")) cfg.t_cap = j["t_cap"].get<double>();
        if (j.contains("flavor")) cfg.flavor = j["flavor"].get<std::string>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("format")) cfg.format = j["format"].get<std::string>();
        if (j.contains("dump_logs")) cfg.dump_logs = j["dump_logs"].get<std::string>();
        if (j.contains("dump_count")) cfg.dump_count = j["dump_count"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: bad field type: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string s = cfg.to_json();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

struct RowTimer {
    double start = now_seconds();
    double elapsed() const { return now_seconds() - start; }
};

void run_simulate(const ExperimentConfig& cfg, RunResult& out) {
    for (int n : cfg.n) {
        for (std::uint32_t q : cfg.q) {
            for (double T : cfg.T) {
                RowTimer timer;

                // exact reference when the space fits under the cap
                bool have_exact = true;
                std::vector<char> in_aset;
                double p_star = 0.0, pi_star = 0.0, exact_tv = 0.0;
                StateSpace space;
                try {
                    space = StateSpace::enumerate(ModelSpec{ModelKind::GroupWalk, n, q, 0.5}, cfg.cap);
                } catch (const CapExceeded&) {
                    have_exact = false;
                }
                if (have_exact) {
                    const SparseGenerator gen = build_generator(space);
                    const std::vector<double> pi = stationary_dist(space);
                    std::vector<double> mu0(space.size(), 0.0);
                    mu0[space.index_of(UnitriMatrix(n, q))] = 1.0;
                    const std::vector<double> mu = transient_dist(gen, mu0, T);
                    in_aset.assign(space.size(), 0);
                    for (std::size_t x = 0; x < space.size(); ++x) {
                        if (mu[x] > pi[x]) {
                            in_aset[x] = 1;
                            p_star += mu[x];
                            pi_star += pi[x];
                        }
                    }
                    exact_tv = p_star - pi_star;
                }

                const std::uint64_t chunks = (cfg.samples + kParallelChunk - 1) / kParallelChunk;
                std::vector<std::uint64_t> hits(chunks, 0);
                std::vector<std::uint64_t> events(chunks, 0);
                std::vector<double> events_sq(chunks, 0.0);
                parallel_chunks(cfg.samples, [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
                    EventLog log;
                    for (std::uint64_t t = b; t < e; ++t) {
                        const std::uint64_t s = CounterRng::derive_key(cfg.seed, DOM_WALK, t);
                        sample_event_log_into(log, n, q, T, s);
                        events[c] += log.events.size();
                        events_sq[c] += static_cast<double>(log.events.size()) *
                                        static_cast<double>(log.events.size());
                        if (have_exact) {
                            const UnitriMatrix x = evolve_forward(log);
                            if (in_aset[space.index_of(x)]) ++hits[c];
                        }
                    }
                });
                std::uint64_t hit_total = 0, ev_total = 0;
                double ev_sq = 0.0;
                for (std::uint64_t c = 0; c < chunks; ++c) {
                    hit_total += hits[c];
                    ev_total += events[c];
                    ev_sq += events_sq[c];
                }

                const double mean_ev = static_cast<double>(ev_total) / static_cast<double>(cfg.samples);
                const double var_ev =
                    std::max(0.0, ev_sq / static_cast<double>(cfg.samples) - mean_ev * mean_ev);
                out.rows.push_back(ResultRow{cfg.kind, n, static_cast<double>(q), T, true,
                                             "mean_event_count", mean_ev,
                                             std::sqrt(var_ev / static_cast<double>(cfg.samples)),
                                             cfg.seed, timer.elapsed()});
                if (have_exact) {
                    // binomial estimate of mu_T(A*) on the exact maximizing set
                    const BinomialCI ci = clopper_pearson(hit_total, cfg.samples, 0.99);
                    const double est = std::abs(ci.point - pi_star);
                    const double hw = std::max(ci.upper - ci.point, ci.point - ci.lower);
                    out.rows.push_back(ResultRow{cfg.kind, n, static_cast<double>(q), T, true,
                                                 "mc_tv_estimate", est, hw, cfg.seed, timer.elapsed()});
                    out.rows.push_back(ResultRow{cfg.kind, n, static_cast<double>(q), T, true,
                                                 "exact_tv", exact_tv, 1e-12, cfg.seed,
                                                 timer.elapsed()});
                }

                if (!cfg.dump_logs.empty()) {
                    std::filesystem::create_directories(cfg.dump_logs);
                    for (std::uint64_t t = 0; t < std::min<std::uint64_t>(cfg.dump_count, cfg.samples); ++t) {
                        const std::uint64_t s = CounterRng::derive_key(cfg.seed, DOM_WALK, t);
                        const EventLog log = sample_event_log(n, q, T, s);
                        char name[160];
                        std::snprintf(name, sizeof name, "log_n%d_q%u_T%s_%llu.tsv", n, q,
                                      fmt_double(T).c_str(), static_cast<unsigned long long>(t));
                        std::ofstream f(std::filesystem::path(cfg.dump_logs) / name);
                        f << log.to_tsv();
                    }
                }
            }
        }
    }
}

void run_exact(const ExperimentConfig& cfg, RunResult& out) {
    for (int n : cfg.n) {
        for (std::uint32_t q : cfg.q) {
            RowTimer timer;
            const StateSpace space = StateSpace::enumerate(ModelSpec{ModelKind::GroupWalk, n, q, 0.5}, cfg.cap);
            const SparseGenerator gen = build_generator(space);
            const std::vector<double> pi = stationary_dist(space);
            const StationarityReport st = stationarity_residual(gen, pi);
            const SpectralResult sg = spectral_gap(gen, pi);
            const double tmix = exact_tmix(space, gen, pi, cfg.eps);
            const double qd = static_cast<double>(q);
            out.rows.push_back(ResultRow{cfg.kind, n, qd, 0, false, "spectral_gap", sg.gap,
                                         sg.residual, cfg.seed, timer.elapsed()});
            out.rows.push_back(ResultRow{cfg.kind, n, qd, 0, false, "exact_tmix", tmix, 1e-6,
                                         cfg.seed, timer.elapsed()});
            out.rows.push_back(ResultRow{cfg.kind, n, qd, 0, false, "stationarity_residual",
                                         st.stationarity_residual, 0.0, cfg.seed, timer.elapsed()});
            out.rows.push_back(ResultRow{cfg.kind, n, qd, 0, false, "reversibility_residual",
                                         st.reversibility_residual, 0.0, cfg.seed, timer.elapsed()});
        }
    }
}

void run_certify(const ExperimentConfig& cfg, RunResult& out) {
    for (int n : cfg.n) {
        for (std::uint32_t q : cfg.q) {
            for (double T : cfg.T) {
                RowTimer timer;
                CertificateReport rep =
                    certified_tv_upper(n, q, T, cfg.base_n0, cfg.samples, cfg.delta, cfg.seed, cfg.cap);
                const double qd = static_cast<double>(q);
                out.rows.push_back(ResultRow{cfg.kind, n, qd, T, true, "certified_tv_upper",
                                             rep.bound, cfg.delta, cfg.seed, timer.elapsed()});
                out.rows.push_back(ResultRow{cfg.kind, rep.base_n0, qd, T, true, "base_exact_tv",
                                             rep.base_tv, 1e-12, cfg.seed, timer.elapsed()});
                for (const auto& lv : rep.levels) {
                    out.rows.push_back(ResultRow{cfg.kind, lv.i, qd, T, true, "span_failure_ci_upper",
                                                 lv.ci_upper,
                                                 static_cast<double>(lv.failures), cfg.seed,
                                                 timer.elapsed()});
                }
                out.reports.push_back(std::move(rep));
            }
        }
    }
}

void run_east_gap(const ExperimentConfig& cfg, RunResult& out) {
    auto emit = [&](double q_or_p, ModelKind kind, std::uint32_t q, double p) {
        double running_inf = std::numeric_limits<double>::infinity();
        for (int n : cfg.n) {
            RowTimer timer;
            const StateSpace space = StateSpace::enumerate(ModelSpec{kind, n, q, p}, cfg.cap);
            const SparseGenerator gen = build_generator(space);
            const std::vector<double> pi = stationary_dist(space);
            const SpectralResult sg = spectral_gap(gen, pi);
            running_inf = std::min(running_inf, sg.gap);
            out.rows.push_back(ResultRow{cfg.kind, n, q_or_p, 0, false, "spectral_gap", sg.gap,
                                         sg.residual, cfg.seed, timer.elapsed()});
        }
        out.rows.push_back(ResultRow{cfg.kind, cfg.n.back(), q_or_p, 0, false, "running_infimum",
                                     running_inf, 0.0, cfg.seed, 0.0});
    };
    if (cfg.flavor == "binary") {
        for (double p : cfg.p) emit(p, ModelKind::EastBinary, 2, p);
    } else {
        for (std::uint32_t q : cfg.q) emit(static_cast<double>(q), ModelKind::EastQ, q, 0.5);
    }
}

void run_scaling(const ExperimentConfig& cfg, RunResult& out) {
    std::vector<ScalingRow> fit_rows;
    for (std::uint32_t q : cfg.q) {
        for (int n : cfg.n) {
            RowTimer timer;
            CertParams cp;
            cp.base_n0 = cfg.base_n0;
            cp.samples = cfg.samples;
            cp.delta = cfg.delta;
            cp.cap = cfg.cap;
            cp.seed = CounterRng::derive_key(cfg.seed, DOM_TMIX,
                                             (static_cast<std::uint64_t>(q) << 32) |
                                                 static_cast<std::uint64_t>(n));
            const TmixSearchResult res = tmix_search(n, q, cfg.eps, cp, 0.05, cfg.t_cap);
            fit_rows.push_back(ScalingRow{n, q, res.t_star});
            const double qd = static_cast<double>(q);
            out.rows.push_back(ResultRow{cfg.kind, n, qd, res.t_star, true, "tmix_upper_T_star",
                                         res.t_star, 0.05 * res.t_star, cfg.seed, timer.elapsed()});
            // discrete-step equivalent: the continuous chain runs n-1 clocks at rate 1
            out.rows.push_back(ResultRow{cfg.kind, n, qd, res.t_star, true, "tmix_upper_steps",
                                         res.t_star * (n - 1), 0.05 * res.t_star * (n - 1),
                                         cfg.seed, timer.elapsed()});
        }
    }
    std::set<int> distinct_n(cfg.n.begin(), cfg.n.end());
    if (distinct_n.size() >= 3) {
        out.fit = scaling_fit(fit_rows);
        out.has_fit = true;
        out.rows.push_back(ResultRow{cfg.kind, 0, 0, 0, false, "fit_alpha", out.fit.alpha, 0.0,
                                     cfg.seed, 0.0});
        if (out.fit.beta_fitted) {
            out.rows.push_back(ResultRow{cfg.kind, 0, 0, 0, false, "fit_beta", out.fit.beta, 0.0,
                                         cfg.seed, 0.0});
        }
        out.rows.push_back(ResultRow{cfg.kind, 0, 0, 0, false, "fit_C", out.fit.c, 0.0, cfg.seed, 0.0});
        out.rows.push_back(ResultRow{cfg.kind, 0, 0, 0, false, "fit_max_residual",
                                     out.fit.max_residual, 0.0, cfg.seed, 0.0});
    }
}

void run_lower_bound(const ExperimentConfig& cfg, RunResult& out) {
    for (int n : cfg.n) {
        for (std::uint32_t q : cfg.q) {
            for (double T : cfg.T) {
                RowTimer timer;
                const TvLowerBound lb = tv_lower_statistic(n, q, T, cfg.samples, cfg.seed, cfg.delta);
                const double qd = static_cast<double>(q);
                out.rows.push_back(ResultRow{cfg.kind, n, qd, T, true, "tv_lower_certified",
                                             lb.certified, cfg.delta, cfg.seed, timer.elapsed()});
                out.rows.push_back(ResultRow{cfg.kind, n, qd, T, true, "tv_lower_point", lb.point,
                                             static_cast<double>(lb.threshold), cfg.seed,
                                             timer.elapsed()});
            }
        }
    }
}

} // namespace

RunResult run(const ExperimentConfig& cfg) {
    cfg.validate();
    RunResult out;
    out.config = cfg;
    out.hash = config_hash(cfg);
    if (cfg.kind == "simulate") {
        run_simulate(cfg, out);
    } else if (cfg.kind == "exact") {
        run_exact(cfg, out);
    } else if (cfg.kind == "certify") {
        run_certify(cfg, out);
    } else if (cfg.kind == "east-gap") {
        run_east_gap(cfg, out);
    } else if (cfg.kind == "scaling") {
        run_scaling(cfg, out);
    } else if (cfg.kind == "lower-bound") {
        run_lower_bound(cfg, out);
    }
    return out;
}

std::string RunResult::to_csv() const {
    std::string s;
    s += "# unitriwalk results\n";
    s += "# config: " + config.to_json() + "\n";
    s += "# config_hash: " + hash + "\n";
    s += "kind,n,q_or_p,T,quantity,value,uncertainty,seed,walltime_s\n";
    for (const auto& r : rows) {
        s += r.kind + ',' + std::to_string(r.n) + ',' + fmt_double(r.q_or_p) + ',';
        if (r.has_T) s += fmt_double(r.T);
        s += ',' + r.quantity + ',' + fmt_double(r.value) + ',' + fmt_double(r.uncertainty) + ',' +
             std::to_string(r.seed) + ',' + fmt_double(r.walltime_s) + '\n';
    }
    return s;
}

std::string RunResult::to_json() const {
    json j;
    j["config"] = json::parse(config.to_json());
    j["config_hash"] = hash;
    j["rows"] = json::array();
    for (const auto& r : rows) {
        json row;
        row["kind"] = r.kind;
        row["n"] = r.n;
        row["q_or_p"] = r.q_or_p;
        if (r.has_T) row["T"] = r.T;
        row["quantity"] = r.quantity;
        row["value"] = r.value;
        row["uncertainty"] = r.uncertainty;
        row["seed"] = r.seed;
        row["walltime_s"] = r.walltime_s;
        j["rows"].push_back(row);
    }
    if (!reports.empty()) {
        j["reports"] = json::array();
        for (const auto& rep : reports) j["reports"].push_back(json::parse(rep.to_json()));
    }
    if (has_fit) {
        j["fit"] = {{"C", fit.c},
                    {"alpha", fit.alpha},
                    {"beta", fit.beta},
                    {"beta_fitted", fit.beta_fitted},
                    {"max_residual", fit.max_residual},
                    {"rows", fit.rows}};
    }
    return j.dump(2);
}

void write_outputs(const RunResult& result) {
    if (result.config.out.empty()) return;
    std::string content;
    if (result.config.format == "json") {
        // a single certificate is written in its bare schema
        if (result.config.kind == "certify" && result.reports.size() == 1) {
            content = result.reports[0].to_json();
        } else {
            content = result.to_json();
        }
        content += '\n';
    } else {
        content = result.to_csv();
    }

    const std::filesystem::path target(result.config.out);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string());
        f << content;
        f.flush();
        if (!f) throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::vector<ScalingRow> read_scaling_rows_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::vector<ScalingRow> rows;
    std::string line;
    bool harness_format = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("kind,", 0) == 0) {
            harness_format = true;
            continue;
        }
        if (harness_format) {
            // kind,n,q_or_p,T,quantity,value,...
            char kind[64], quantity[64];
            int n;
            double q_or_p, T, value;
            if (std::sscanf(line.c_str(), "%63[^,],%d,%lg,%lg,%63[^,],%lg", kind, &n, &q_or_p, &T,
                            quantity, &value) == 6 &&
                std::string(quantity) == "tmix_upper_T_star") {
                rows.push_back(ScalingRow{n, static_cast<std::uint32_t>(q_or_p), value});
            }
        } else {
            int n;
            double q, t;
            if (std::sscanf(line.c_str(), "%d,%lg,%lg", &n, &q, &t) == 3) {
                rows.push_back(ScalingRow{n, static_cast<std::uint32_t>(q), t});
            }
        }
    }
    if (rows.empty()) throw IoError("no T* rows found in " + path);
    return rows;
}

} // namespace utw
