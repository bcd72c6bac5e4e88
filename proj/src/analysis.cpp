#include "unitriwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>

#include "unitriwalk/rng.hpp"

namespace utw {

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InvalidArgument("tv_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

namespace {

// one uniformization step: v <- v (I + L/lambda)
void uniform_step(const SparseGenerator& gen, double lambda, std::vector<double>& v,
                  std::vector<double>& scratch) {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    for (std::size_t x = 0; x < gen.size; ++x) {
        const double vx = v[x];
        if (vx == 0.0) continue;
        for (std::size_t k = gen.row_ptr[x]; k < gen.row_ptr[x + 1]; ++k) {
            scratch[gen.col[k]] += vx * gen.val[k];
        }
    }
    const double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += scratch[i] * inv;
}

double log_poisson_pmf(double m, std::uint64_t k) {
    return static_cast<double>(k) * std::log(m) - m - std::lgamma(static_cast<double>(k) + 1.0);
}

} // namespace

std::vector<double> transient_dist(const SparseGenerator& gen, const std::vector<double>& mu0,
                                   double t, double tail_mass) {
    if (mu0.size() != gen.size) throw InvalidArgument("mu0 has wrong length");
    if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0");

    const double lambda = gen.max_exit_rate();
    const double m = lambda * t;
    if (m == 0.0) return mu0;

    std::vector<double> v = mu0;
    std::vector<double> out(gen.size, 0.0);
    std::vector<double> scratch(gen.size);

    double cum = 0.0;
    const double target = 1.0 - tail_mass;
    const std::uint64_t hard_cap =
        static_cast<std::uint64_t>(m + 12.0 * std::sqrt(m) + 80.0);
    for (std::uint64_t k = 0;; ++k) {
        const double w = std::exp(log_poisson_pmf(m, k));
        if (w > 0.0) {
            for (std::size_t i = 0; i < gen.size; ++i) out[i] += w * v[i];
            cum += w;
        }
        if (cum >= target || k >= hard_cap) break;
        uniform_step(gen, lambda, v, scratch);
    }
    // renormalize the truncated series; keeps out a probability vector
    if (cum > 0.0) {
        const double inv = 1.0 / cum;
        for (double& x : out) x *= inv;
    }
    return out;
}

std::vector<double> tv_curve(const SparseGenerator& gen, const std::vector<double>& mu0,
                             const std::vector<double>& pi, const std::vector<double>& times,
                             double tail_mass) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(tv_distance(transient_dist(gen, mu0, t, tail_mass), pi));
    }
    return out;
}

std::vector<double> discrete_transient(const SparseGenerator& gen, int num_clocks,
                                       const std::vector<double>& mu0, std::uint64_t steps) {
    if (num_clocks < 1) throw InvalidArgument("num_clocks must be >= 1");
    if (gen.max_exit_rate() > static_cast<double>(num_clocks) + 1e-12) {
        throw InvalidArgument("num_clocks too small for this generator");
    }
    std::vector<double> v = mu0;
    std::vector<double> scratch(gen.size);
    for (std::uint64_t s = 0; s < steps; ++s) {
        uniform_step(gen, static_cast<double>(num_clocks), v, scratch);
    }
    return v;
}

std::vector<double> discrete_tv_curve(const SparseGenerator& gen, int num_clocks,
                                      const std::vector<double>& mu0, const std::vector<double>& pi,
                                      const std::vector<std::uint64_t>& steps) {
    if (num_clocks < 1) throw InvalidArgument("num_clocks must be >= 1");
    if (gen.max_exit_rate() > static_cast<double>(num_clocks) + 1e-12) {
        throw InvalidArgument("num_clocks too small for this generator");
    }
    std::vector<std::uint64_t> sorted = steps;
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> v = mu0;
    std::vector<double> scratch(gen.size);
    std::vector<double> by_step(sorted.empty() ? 0 : sorted.back() + 1, -1.0);

    std::uint64_t s = 0;
    for (std::uint64_t want : sorted) {
        while (s < want) {
            uniform_step(gen, static_cast<double>(num_clocks), v, scratch);
            ++s;
        }
        by_step[want] = tv_distance(v, pi);
    }
    std::vector<double> out;
    out.reserve(steps.size());
    for (std::uint64_t want : steps) out.push_back(by_step[want]);
    return out;
}

double exact_tmix(const StateSpace& space, const SparseGenerator& gen, const std::vector<double>& pi,
                  double eps, double t_tol) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must be in (0,1)");

    std::vector<std::size_t> starts;
    if (space.model().kind == ModelKind::GroupWalk) {
        starts.push_back(space.index_of(UnitriMatrix(space.model().n, space.model().q)));
    } else {
        starts.resize(space.size());
        for (std::size_t i = 0; i < space.size(); ++i) starts[i] = i;
    }

    auto worst_tv = [&](double t) {
        double worst = 0.0;
        for (std::size_t s : starts) {
            std::vector<double> mu0(space.size(), 0.0);
            mu0[s] = 1.0;
            worst = std::max(worst, tv_distance(transient_dist(gen, mu0, t), pi));
        }
        return worst;
    };

    if (worst_tv(0.0) <= eps) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (worst_tv(hi) > eps) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw InvalidArgument("exact_tmix: no mixing below t = 1e6");
    }
    while (hi - lo > t_tol) {
        const double mid = 0.5 * (lo + hi);
        if (worst_tv(mid) <= eps) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

namespace {

// symmetrized operator entries A_xy = -L_xy sqrt(pi_x / pi_y)
SparseGenerator symmetrize(const SparseGenerator& gen, const std::vector<double>& pi) {
    SparseGenerator a = gen;
    for (std::size_t x = 0; x < gen.size; ++x) {
        for (std::size_t k = gen.row_ptr[x]; k < gen.row_ptr[x + 1]; ++k) {
            const std::size_t y = gen.col[k];
            a.val[k] = -gen.val[k] * std::sqrt(pi[x] / pi[y]);
        }
    }
    return a;
}

void apply_sym(const SparseGenerator& a, const std::vector<double>& v, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t x = 0; x < a.size; ++x) {
        for (std::size_t k = a.row_ptr[x]; k < a.row_ptr[x + 1]; ++k) {
            out[x] += a.val[k] * v[a.col[k]];
        }
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(std::vector<double>& y, double c, const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

SpectralResult lanczos_gap(const SparseGenerator& sym, const std::vector<double>& pi) {
    const std::size_t s = sym.size;
    std::vector<double> u(s);
    for (std::size_t i = 0; i < s; ++i) u[i] = std::sqrt(pi[i]);
    const double un = norm2(u);
    for (double& x : u) x /= un;

    const std::size_t maxit = std::min<std::size_t>(s - 1, s > 16384 ? 260 : 420);
    std::vector<std::vector<double>> basis;
    basis.reserve(maxit);
    std::vector<double> alpha, beta;

    CounterRng rng = CounterRng::stream(0, DOM_LANCZOS, 0);
    std::vector<double> v(s);
    for (auto& x : v) x = rng.next_unit() - 0.5;
    axpy(v, -dot(u, v), u);
    double vn = norm2(v);
    for (auto& x : v) x /= vn;
    basis.push_back(v);

    std::vector<double> w(s);
    double theta = 0.0, resid = 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;

    for (std::size_t j = 0; j < maxit; ++j) {
        apply_sym(sym, basis[j], w);
        if (j > 0) axpy(w, -beta[j - 1], basis[j - 1]);
        const double a = dot(basis[j], w);
        alpha.push_back(a);
        axpy(w, -a, basis[j]);
        // full reorthogonalization, twice, against the deflated vector too
        for (int pass = 0; pass < 2; ++pass) {
            axpy(w, -dot(u, w), u);
            for (const auto& b : basis) axpy(w, -dot(b, w), b);
        }
        const double bn = norm2(w);
        beta.push_back(bn);

        const std::size_t m = alpha.size();
        const bool check = (m % 5 == 0 || bn < 1e-13 || j + 1 == maxit);
        if (check) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<long>(m), static_cast<long>(m));
            for (std::size_t i = 0; i < m; ++i) {
                t(static_cast<long>(i), static_cast<long>(i)) = alpha[i];
                if (i + 1 < m) {
                    t(static_cast<long>(i), static_cast<long>(i + 1)) = beta[i];
                    t(static_cast<long>(i + 1), static_cast<long>(i)) = beta[i];
                }
            }
            es.compute(t);
            long which = 0;
            es.eigenvalues().minCoeff(&which);
            theta = es.eigenvalues()(which);
            const double last = es.eigenvectors()(static_cast<long>(m) - 1, which);
            resid = std::abs(bn * last);
            if (resid < 1e-10 || bn < 1e-13) break;
        }
        if (bn < 1e-13) break;
        std::vector<double> next = w;
        for (auto& x : next) x /= bn;
        basis.push_back(std::move(next));
    }
    return SpectralResult{theta, "iterative", resid};
}

} // namespace

SpectralResult spectral_gap(const SparseGenerator& gen, const std::vector<double>& pi,
                            std::size_t dense_limit) {
    if (pi.size() != gen.size) throw InvalidArgument("pi has wrong length");
    if (gen.size == 1) return SpectralResult{0.0, "dense-eigen", 0.0};

    const double rev = stationarity_residual(gen, pi).reversibility_residual;
    const double scale = std::max(1.0, gen.max_exit_rate());
    if (rev > 1e-8 * scale) {
        throw InvalidArgument("spectral_gap requires a reversible (L, pi) pair");
    }

    const SparseGenerator sym = symmetrize(gen, pi);
    if (gen.size <= dense_limit) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<long>(sym.size), static_cast<long>(sym.size));
        for (std::size_t x = 0; x < sym.size; ++x) {
            for (std::size_t k = sym.row_ptr[x]; k < sym.row_ptr[x + 1]; ++k) {
                a(static_cast<long>(x), static_cast<long>(sym.col[k])) = sym.val[k];
            }
        }
        // exact symmetry for the solver; entries may differ in the last ulp
        a = 0.5 * (a + a.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        const double residual = std::abs(ev(0)) +
                                16.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(gen.size);
        return SpectralResult{ev(1), "dense-eigen", residual};
    }
    return lanczos_gap(sym, pi);
}

LumpResult lump_check(const SparseGenerator& gen, const std::vector<std::size_t>& partition,
                      std::size_t num_classes, double tol) {
    if (partition.size() != gen.size) throw InvalidArgument("partition has wrong length");
    LumpResult res;
    res.classes = num_classes;

    std::vector<double> ref(num_classes * num_classes, 0.0);
    std::vector<std::size_t> rep(num_classes, SIZE_MAX);
    std::vector<double> rates(num_classes);

    for (std::size_t x = 0; x < gen.size; ++x) {
        const std::size_t cx = partition[x];
        if (cx >= num_classes) throw InvalidArgument("partition class out of range");
        std::fill(rates.begin(), rates.end(), 0.0);
        for (std::size_t k = gen.row_ptr[x]; k < gen.row_ptr[x + 1]; ++k) {
            const std::size_t y = gen.col[k];
            if (y == x) continue;
            rates[partition[y]] += gen.val[k];
        }
        if (rep[cx] == SIZE_MAX) {
            rep[cx] = x;
            for (std::size_t c = 0; c < num_classes; ++c) ref[cx * num_classes + c] = rates[c];
        } else {
            for (std::size_t c = 0; c < num_classes; ++c) {
                if (c == cx) continue; // intra-class rates are invisible after lumping
                const double diff = std::abs(rates[c] - ref[cx * num_classes + c]);
                if (diff > tol) {
                    res.lumpable = false;
                    res.state_a = rep[cx];
                    res.state_b = x;
                    res.bad_class = c;
                    res.discrepancy = diff;
                    return res;
                }
            }
        }
    }

    res.lumpable = true;
    res.lumped.assign(num_classes * num_classes, 0.0);
    for (std::size_t b = 0; b < num_classes; ++b) {
        if (rep[b] == SIZE_MAX) throw InvalidArgument("partition has an empty class");
        double exit = 0.0;
        for (std::size_t c = 0; c < num_classes; ++c) {
            if (c == b) continue;
            res.lumped[b * num_classes + c] = ref[b * num_classes + c];
            exit += ref[b * num_classes + c];
        }
        res.lumped[b * num_classes + b] = -exit;
    }
    return res;
}

std::vector<std::size_t> psi_partition(const StateSpace& qspace) {
    if (qspace.model().kind != ModelKind::EastQ) throw InvalidArgument("psi_partition needs a q-state East space");
    const int n = qspace.model().n;
    std::vector<std::size_t> part(qspace.size());
    for (std::size_t x = 0; x < qspace.size(); ++x) {
        const EastState h = qspace.east_at(x);
        std::size_t idx = 0;
        for (int i = 2; i <= n; ++i) idx = idx * 2 + (h.at(i) != 0 ? 1 : 0);
        part[x] = idx;
    }
    return part;
}

std::vector<std::size_t> column_partition(const StateSpace& walk_space, int j) {
    if (walk_space.model().kind != ModelKind::GroupWalk) throw InvalidArgument("column_partition needs a walk space");
    const int n = walk_space.model().n;
    const std::uint32_t q = walk_space.model().q;
    if (j < 1 || j > n) throw InvalidArgument("column index out of range");
    std::vector<std::size_t> part(walk_space.size());
    for (std::size_t x = 0; x < walk_space.size(); ++x) {
        const UnitriMatrix m = walk_space.matrix_at(x);
        // East site i is matrix entry (j+1-i, j); site 1 is the diagonal 1
        std::size_t idx = 0;
        for (int i = 2; i <= j; ++i) idx = idx * q + m.at(j + 1 - i, j);
        part[x] = idx;
    }
    return part;
}

std::vector<double> dense_generator(const SparseGenerator& gen) {
    std::vector<double> d(gen.size * gen.size, 0.0);
    for (std::size_t x = 0; x < gen.size; ++x) {
        for (std::size_t k = gen.row_ptr[x]; k < gen.row_ptr[x + 1]; ++k) {
            d[x * gen.size + gen.col[k]] = gen.val[k];
        }
    }
    return d;
}

std::vector<ExactRow> exact_summary(const StateSpace& space, const SparseGenerator& gen,
                                    const std::vector<double>& pi, double eps) {
    const ModelSpec& m = space.model();
    std::string model;
    double q_or_p = 0.0;
    switch (m.kind) {
    case ModelKind::GroupWalk:
        model = "group-walk";
        q_or_p = m.q;
        break;
    case ModelKind::EastBinary:
        model = "east-binary";
        q_or_p = m.p;
        break;
    case ModelKind::EastQ:
        model = "east-qstate";
        q_or_p = m.q;
        break;
    }
    const SpectralResult sg = spectral_gap(gen, pi);
    const StationarityReport st = stationarity_residual(gen, pi);
    const double tmix = exact_tmix(space, gen, pi, eps);
    return {
        {model, m.n, q_or_p, "spectral_gap", sg.gap, sg.residual},
        {model, m.n, q_or_p, "exact_tmix", tmix, 1e-6},
        {model, m.n, q_or_p, "stationarity", 0.0, st.stationarity_residual},
        {model, m.n, q_or_p, "reversibility", 0.0, st.reversibility_residual},
    };
}

std::string exact_rows_csv(const std::vector<ExactRow>& rows) {
    std::string s = "model,n,q_or_p,quantity,value,residual\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%s,%.17g,%.17g\n", r.model.c_str(), r.n,
                      r.q_or_p, r.quantity.c_str(), r.value, r.residual);
        s += buf;
    }
    return s;
}

std::vector<GapRow> gap_table(ModelKind flavor, std::uint32_t q, double p, int n_lo, int n_hi,
                              std::size_t cap, std::size_t dense_limit) {
    if (flavor == ModelKind::GroupWalk) throw InvalidArgument("gap_table is for East flavors");
    if (n_lo < 2 || n_hi < n_lo) throw InvalidArgument("bad n range");
    std::vector<GapRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        ModelSpec spec{flavor, n, q, p};
        const StateSpace space = StateSpace::enumerate(spec, cap);
        const SparseGenerator gen = build_generator(space);
        const std::vector<double> pi = stationary_dist(space);
        rows.push_back(GapRow{n, spectral_gap(gen, pi, dense_limit)});
    }
    return rows;
}

} // namespace utw
