#include "unitriwalk/matrix.hpp"

namespace utw {

FieldVector::FieldVector(int length, std::uint32_t modulus) : q(modulus) {
    require_prime(modulus);
    if (length < 0) throw InvalidArgument("vector length must be >= 0");
    v.assign(static_cast<std::size_t>(length), 0);
}

FieldVector FieldVector::basis(int length, std::uint32_t modulus, int i) {
    FieldVector e(length, modulus);
    if (i < 1 || i > length) throw InvalidArgument("basis index out of range");
    e.set(i, 1);
    return e;
}

bool FieldVector::is_zero() const {
    for (auto x : v) {
        if (x != 0) return false;
    }
    return true;
}

FpMatrix::FpMatrix(int n, std::uint32_t q) : n_(n), q_(q) {
    require_prime(q);
    if (n < 1) throw InvalidArgument("matrix dimension must be >= 1");
    e_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

FpMatrix FpMatrix::identity(int n, std::uint32_t q) {
    FpMatrix m(n, q);
    for (int i = 1; i <= n; ++i) m.set(i, i, 1);
    return m;
}

FpMatrix FpMatrix::elementary(int n, std::uint32_t q, int i, int j) {
    FpMatrix m(n, q);
    if (i < 1 || i > n || j < 1 || j > n) throw InvalidArgument("elementary index out of range");
    m.set(i, j, 1);
    return m;
}

static void require_compatible(const FpMatrix& a, const FpMatrix& b) {
    if (a.n() != b.n()) throw InvalidArgument("matrix dimension mismatch");
    if (a.q() != b.q()) throw InvalidArgument("matrix modulus mismatch");
}

FpMatrix FpMatrix::mul(const FpMatrix& rhs) const {
    require_compatible(*this, rhs);
    FpMatrix out(n_, q_);
    for (int i = 1; i <= n_; ++i) {
        for (int k = 1; k <= n_; ++k) {
            const std::uint32_t aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 1; j <= n_; ++j) {
                const std::uint32_t bkj = rhs.at(k, j);
                if (bkj == 0) continue;
                out.set(i, j, out.at(i, j) + aik * bkj);
            }
        }
    }
    return out;
}

FpMatrix FpMatrix::add(const FpMatrix& rhs) const {
    require_compatible(*this, rhs);
    FpMatrix out(n_, q_);
    for (std::size_t k = 0; k < e_.size(); ++k) {
        out.e_[k] = static_cast<std::uint8_t>((e_[k] + rhs.e_[k]) % q_);
    }
    return out;
}

FpMatrix FpMatrix::scaled(std::uint32_t a) const {
    FpMatrix out(n_, q_);
    a %= q_;
    for (std::size_t k = 0; k < e_.size(); ++k) {
        out.e_[k] = static_cast<std::uint8_t>((e_[k] * a) % q_);
    }
    return out;
}

FieldVector FpMatrix::mul(const FieldVector& x) const {
    if (x.length() != n_) throw InvalidArgument("matrix/vector dimension mismatch");
    if (x.q != q_) throw InvalidArgument("matrix/vector modulus mismatch");
    FieldVector out(n_, q_);
    for (int i = 1; i <= n_; ++i) {
        std::uint32_t acc = 0;
        for (int j = 1; j <= n_; ++j) acc += at(i, j) * x.at(j);
        out.set(i, acc);
    }
    return out;
}

FieldVector FpMatrix::left_mul(const FieldVector& b) const {
    if (b.length() != n_) throw InvalidArgument("matrix/vector dimension mismatch");
    if (b.q != q_) throw InvalidArgument("matrix/vector modulus mismatch");
    FieldVector out(n_, q_);
    for (int j = 1; j <= n_; ++j) {
        std::uint32_t acc = 0;
        for (int i = 1; i <= n_; ++i) acc += b.at(i) * at(i, j);
        out.set(j, acc);
    }
    return out;
}

bool FpMatrix::is_unitriangular() const {
    for (int i = 1; i <= n_; ++i) {
        if (at(i, i) != 1) return false;
        for (int j = 1; j < i; ++j) {
            if (at(i, j) != 0) return false;
        }
    }
    return true;
}

bool FpMatrix::is_zero() const {
    for (auto x : e_) {
        if (x != 0) return false;
    }
    return true;
}

std::string FpMatrix::debug_string() const {
    std::string s;
    for (int i = 1; i <= n_; ++i) {
        if (i > 1) s += '/';
        for (int j = 1; j <= n_; ++j) s += std::to_string(at(i, j));
    }
    return s;
}

UnitriMatrix::UnitriMatrix(int n, std::uint32_t q) : m_(FpMatrix::identity(n, q)) {}

UnitriMatrix UnitriMatrix::from_matrix(const FpMatrix& m) {
    if (!m.is_unitriangular()) throw InvalidArgument("matrix is not unitriangular");
    UnitriMatrix x;
    x.m_ = m;
    return x;
}

void UnitriMatrix::row_update(int i, std::uint32_t a) {
    const int n = m_.n();
    if (i < 1 || i > n - 1) throw InvalidArgument("row_update index out of range");
    a %= m_.q();
    if (a == 0) return;
    // row i+1 is zero left of its diagonal, so columns < i+1 are untouched
    for (int j = i + 1; j <= n; ++j) {
        m_.set(i, j, m_.at(i, j) + a * m_.at(i + 1, j));
    }
}

void UnitriMatrix::col_update(int i, std::uint32_t a) {
    const int n = m_.n();
    if (i < 1 || i > n - 1) throw InvalidArgument("col_update index out of range");
    a %= m_.q();
    if (a == 0) return;
    // column i has no entries below row i
    for (int r = 1; r <= i; ++r) {
        m_.set(r, i + 1, m_.at(r, i + 1) + a * m_.at(r, i));
    }
}

void UnitriMatrix::set_upper(int i, int j, std::uint32_t x) {
    if (!(1 <= i && i < j && j <= n())) throw InvalidArgument("set_upper requires j > i");
    m_.set(i, j, x);
}

UnitriMatrix UnitriMatrix::mul(const UnitriMatrix& rhs) const {
    return from_matrix(m_.mul(rhs.m_));
}

FieldVector UnitriMatrix::column(int j) const {
    if (j < 1 || j > n()) throw InvalidArgument("column index out of range");
    FieldVector out(n(), q());
    for (int i = 1; i <= n(); ++i) out.set(i, m_.at(i, j));
    return out;
}

BitRowMatrix::BitRowMatrix(int n) : n_(n) {
    if (n < 1 || n > 64) throw InvalidArgument("BitRowMatrix supports 1 <= n <= 64");
    rows_.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) rows_[static_cast<std::size_t>(i)] = 1ULL << i;
}

UnitriMatrix BitRowMatrix::to_unitri() const {
    FpMatrix m(n_, 2);
    for (int i = 1; i <= n_; ++i) {
        for (int j = 1; j <= n_; ++j) m.set(i, j, at(i, j));
    }
    return UnitriMatrix::from_matrix(m);
}

BitRowMatrix BitRowMatrix::from_unitri(const UnitriMatrix& x) {
    BitRowMatrix b(x.n());
    for (int i = 1; i <= x.n(); ++i) {
        std::uint64_t w = 0;
        for (int j = 1; j <= x.n(); ++j) {
            if (x.at(i, j)) w |= 1ULL << (j - 1);
        }
        b.rows_[static_cast<std::size_t>(i) - 1] = w;
    }
    return b;
}

FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b) { return a.mul(b); }

} // namespace utw
