#include "unitriwalk/generator.hpp"

#include <algorithm>
#include <cmath>

namespace utw {

double SparseGenerator::entry(std::size_t x, std::size_t y) const {
    const auto lo = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[x]);
    const auto hi = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[x + 1]);
    const auto it = std::lower_bound(lo, hi, static_cast<std::uint32_t>(y));
    if (it == hi || *it != y) return 0.0;
    return val[static_cast<std::size_t>(it - col.begin())];
}

double SparseGenerator::max_exit_rate() const {
    double m = 0.0;
    for (std::size_t x = 0; x < size; ++x) {
        m = std::max(m, -entry(x, x));
    }
    return m;
}

std::vector<double> SparseGenerator::left_apply(const std::vector<double>& v) const {
    std::vector<double> w(size, 0.0);
    for (std::size_t x = 0; x < size; ++x) {
        const double vx = v[x];
        if (vx == 0.0) continue;
        for (std::size_t k = row_ptr[x]; k < row_ptr[x + 1]; ++k) {
            w[col[k]] += vx * val[k];
        }
    }
    return w;
}

namespace {

struct RowBuilder {
    std::vector<std::pair<std::uint32_t, double>> entries;

    void add(std::size_t y, double rate) {
        entries.emplace_back(static_cast<std::uint32_t>(y), rate);
    }

    void flush(std::size_t x, SparseGenerator& g) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double exit = 0.0;
        // merge duplicate targets, drop self-transitions
        std::vector<std::pair<std::uint32_t, double>> merged;
        for (const auto& [y, r] : entries) {
            if (y == static_cast<std::uint32_t>(x)) continue;
            if (!merged.empty() && merged.back().first == y) {
                merged.back().second += r;
            } else {
                merged.emplace_back(y, r);
            }
            exit += r;
        }
        bool diag_written = false;
        for (const auto& [y, r] : merged) {
            if (!diag_written && y > x) {
                g.col.push_back(static_cast<std::uint32_t>(x));
                g.val.push_back(-exit);
                diag_written = true;
            }
            g.col.push_back(y);
            g.val.push_back(r);
        }
        if (!diag_written) {
            g.col.push_back(static_cast<std::uint32_t>(x));
            g.val.push_back(-exit);
        }
        g.row_ptr.push_back(g.col.size());
        entries.clear();
    }
};

} // namespace

SparseGenerator build_generator(const StateSpace& space) {
    const ModelSpec& m = space.model();
    SparseGenerator g;
    g.size = space.size();
    g.row_ptr.reserve(g.size + 1);
    g.row_ptr.push_back(0);

    RowBuilder row;
    for (std::size_t x = 0; x < space.size(); ++x) {
        switch (m.kind) {
        case ModelKind::GroupWalk: {
            const UnitriMatrix state = space.matrix_at(x);
            const double rate = 1.0 / m.q;
            for (int i = 1; i <= m.n - 1; ++i) {
                for (std::uint32_t a = 1; a < m.q; ++a) {
                    UnitriMatrix y = state;
                    y.row_update(i, a);
                    row.add(space.index_of(y), rate);
                }
            }
            break;
        }
        case ModelKind::EastBinary: {
            const EastState h = space.east_at(x);
            for (int i = 1; i <= m.n - 1; ++i) {
                if (h.at(i) != 1) continue;
                EastState y = h;
                if (h.at(i + 1) == 0) {
                    y.set(i + 1, 1);
                    row.add(space.index_of(y), m.p);
                } else {
                    y.set(i + 1, 0);
                    row.add(space.index_of(y), 1.0 - m.p);
                }
            }
            break;
        }
        case ModelKind::EastQ: {
            const EastState h = space.east_at(x);
            const double rate = 1.0 / m.q;
            for (int i = 1; i <= m.n - 1; ++i) {
                if (h.at(i) == 0) continue;
                for (std::uint32_t v = 0; v < m.q; ++v) {
                    if (v == h.at(i + 1)) continue;
                    EastState y = h;
                    y.set(i + 1, v);
                    row.add(space.index_of(y), rate);
                }
            }
            break;
        }
        }
        row.flush(x, g);
    }
    return g;
}

std::vector<double> stationary_dist(const StateSpace& space) {
    const ModelSpec& m = space.model();
    std::vector<double> pi(space.size());
    if (m.kind == ModelKind::EastBinary) {
        for (std::size_t x = 0; x < space.size(); ++x) {
            const EastState h = space.east_at(x);
            double w = 1.0;
            for (int i = 2; i <= m.n; ++i) w *= h.at(i) ? m.p : (1.0 - m.p);
            pi[x] = w;
        }
    } else {
        const double u = 1.0 / static_cast<double>(space.size());
        std::fill(pi.begin(), pi.end(), u);
    }
    return pi;
}

StationarityReport stationarity_residual(const SparseGenerator& gen, const std::vector<double>& pi) {
    if (pi.size() != gen.size) throw InvalidArgument("pi has wrong length");
    StationarityReport rep{0.0, 0.0};
    const std::vector<double> flow = gen.left_apply(pi);
    for (double f : flow) rep.stationarity_residual = std::max(rep.stationarity_residual, std::abs(f));
    for (std::size_t x = 0; x < gen.size; ++x) {
        for (std::size_t k = gen.row_ptr[x]; k < gen.row_ptr[x + 1]; ++k) {
            const std::size_t y = gen.col[k];
            if (y <= x) continue;
            const double diff = std::abs(pi[x] * gen.val[k] - pi[y] * gen.entry(y, x));
            rep.reversibility_residual = std::max(rep.reversibility_residual, diff);
        }
    }
    return rep;
}

} // namespace utw
