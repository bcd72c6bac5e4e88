#include "unitriwalk/rank.hpp"

#include <algorithm>

namespace utw {

RankBasis::RankBasis(int dim, std::uint32_t q) : dim_(dim), q_(q) {
    require_prime(q);
    if (dim < 1) throw InvalidArgument("rank basis dimension must be >= 1");
}

static void axpy(FieldVector& y, std::uint32_t a, const FieldVector& x) {
    for (int i = 1; i <= y.length(); ++i) {
        y.set(i, y.at(i) + a * x.at(i));
    }
}

bool RankBasis::insert(const FieldVector& v) {
    if (v.length() != dim_) throw InvalidArgument("rank insert: dimension mismatch");
    if (v.q != q_) throw InvalidArgument("rank insert: modulus mismatch");

    FieldVector w = v;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const std::uint32_t c = w.at(pivots_[k]);
        if (c != 0) axpy(w, q_ - c, rows_[k]); // pivot rows are normalized to 1
    }
    int piv = 0;
    for (int i = 1; i <= dim_; ++i) {
        if (w.at(i) != 0) { piv = i; break; }
    }
    if (piv == 0) return false;

    // normalize so the pivot entry is 1, then back-reduce existing rows
    const std::uint32_t scale = inv_mod(w.at(piv), q_);
    for (int i = 1; i <= dim_; ++i) w.set(i, w.at(i) * scale);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const std::uint32_t c = rows_[k].at(piv);
        if (c != 0) axpy(rows_[k], q_ - c, w);
    }

    const auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
    rows_.insert(rows_.begin() + pos, std::move(w));
    pivots_.insert(pivots_.begin() + pos, piv);
    return true;
}

} // namespace utw
