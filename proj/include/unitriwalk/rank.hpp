#pragma once

#include <cstdint>
#include <vector>

#include "unitriwalk/matrix.hpp"

namespace utw {

// Incremental rank over Z_q: reduced row echelon form with lowest-index pivot
// preference, so the pivot set is deterministic for a given insertion multiset.
class RankBasis {
public:
    RankBasis(int dim, std::uint32_t q);

    // Reduces v against the basis; if a nonzero remainder survives it becomes
    // a new pivot row. Returns true iff the rank increased.
    bool insert(const FieldVector& v);

    int rank() const { return static_cast<int>(rows_.size()); }
    int dim() const { return dim_; }
    std::uint32_t q() const { return q_; }
    bool full() const { return rank() == dim_; }
    // pivot rows in ascending pivot order
    const std::vector<FieldVector>& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

private:
    int dim_;
    std::uint32_t q_;
    std::vector<FieldVector> rows_;
    std::vector<int> pivots_; // 1-based pivot column of rows_[k]
};

} // namespace utw
