#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unitriwalk/fp.hpp"

namespace utw {

// Vector over Z_q. 1-based accessors to match the clock/site numbering used
// throughout (clocks 1..n-1, basis vectors e_1..e_n).
struct FieldVector {
    std::uint32_t q = 2;
    std::vector<std::uint8_t> v;

    FieldVector() = default;
    FieldVector(int length, std::uint32_t modulus);
    static FieldVector basis(int length, std::uint32_t modulus, int i); // e_i

    int length() const { return static_cast<int>(v.size()); }
    std::uint8_t at(int i) const { return v[static_cast<std::size_t>(i) - 1]; }
    void set(int i, std::uint32_t x) { v[static_cast<std::size_t>(i) - 1] = static_cast<std::uint8_t>(x % q); }
    bool is_zero() const;

    bool operator==(const FieldVector&) const = default;
};

// General n x n matrix over Z_q, row-major residues. Covers the raw E_{i,j}
// elementaries and products that leave the unitriangular group.
class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(int n, std::uint32_t q); // zero matrix
    static FpMatrix identity(int n, std::uint32_t q);
    static FpMatrix elementary(int n, std::uint32_t q, int i, int j); // E_{i,j}

    int n() const { return n_; }
    std::uint32_t q() const { return q_; }
    std::uint8_t at(int i, int j) const { return e_[idx(i, j)]; }
    void set(int i, int j, std::uint32_t x) { e_[idx(i, j)] = static_cast<std::uint8_t>(x % q_); }

    FpMatrix mul(const FpMatrix& rhs) const;   // checked dims/modulus
    FpMatrix add(const FpMatrix& rhs) const;
    FpMatrix scaled(std::uint32_t a) const;
    FieldVector mul(const FieldVector& x) const;       // A x
    FieldVector left_mul(const FieldVector& b) const;  // b A (row vector)

    bool is_unitriangular() const;
    bool is_zero() const;
    // row-major decimal digits, rows separated by '/'
    std::string debug_string() const;

    bool operator==(const FpMatrix&) const = default;

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j - 1);
    }
    int n_ = 0;
    std::uint32_t q_ = 2;
    std::vector<std::uint8_t> e_;
};

// Upper triangular with unit diagonal; the walk's state. Only constructible
// in ways that preserve the invariant.
class UnitriMatrix {
public:
    UnitriMatrix() = default;
    UnitriMatrix(int n, std::uint32_t q); // identity
    static UnitriMatrix from_matrix(const FpMatrix& m); // throws unless unitriangular

    int n() const { return m_.n(); }
    std::uint32_t q() const { return m_.q(); }
    std::uint8_t at(int i, int j) const { return m_.at(i, j); }
    const FpMatrix& mat() const { return m_; }

    // X <- (I + a E_{i,i+1}) X : row i += a * row i+1. 1 <= i <= n-1.
    void row_update(int i, std::uint32_t a);
    // X <- X (I + a E_{i,i+1}) : col i+1 += a * col i. 1 <= i <= n-1.
    void col_update(int i, std::uint32_t a);
    // Entry X_{i,j} <- x for j > i (strict upper part only).
    void set_upper(int i, int j, std::uint32_t x);

    UnitriMatrix mul(const UnitriMatrix& rhs) const;
    FieldVector column(int j) const; // X e_j

    std::string debug_string() const { return m_.debug_string(); }
    bool operator==(const UnitriMatrix&) const = default;

private:
    FpMatrix m_;
};

// q = 2 bit-packed representation: one 64-bit word per row, n <= 64.
// Row updates are single XORs; used by the hot simulation paths and checked
// against the residue representation on identical op sequences.
class BitRowMatrix {
public:
    explicit BitRowMatrix(int n); // identity

    int n() const { return n_; }
    void row_update(int i, std::uint32_t a) {
        if (a & 1u) rows_[static_cast<std::size_t>(i) - 1] ^= rows_[static_cast<std::size_t>(i)];
    }
    std::uint8_t at(int i, int j) const {
        return static_cast<std::uint8_t>((rows_[static_cast<std::size_t>(i) - 1] >> (j - 1)) & 1u);
    }

    UnitriMatrix to_unitri() const;
    static BitRowMatrix from_unitri(const UnitriMatrix& x);

    bool operator==(const BitRowMatrix&) const = default;

private:
    int n_;
    std::vector<std::uint64_t> rows_;
};

// Convenience oracles used widely in tests
FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b);

} // namespace utw
