#pragma once

#include <cstdint>
#include <vector>

#include "unitriwalk/east.hpp"
#include "unitriwalk/matrix.hpp"

namespace utw {

inline constexpr std::size_t kDefaultCap = std::size_t{1} << 16;

enum class ModelKind { GroupWalk, EastBinary, EastQ };

struct ModelSpec {
    ModelKind kind = ModelKind::GroupWalk;
    int n = 2;
    std::uint32_t q = 2; // GroupWalk, EastQ
    double p = 0.5;      // EastBinary

    void validate() const;
};

// Complete enumeration with stable lexicographic indexing: the free
// coordinates (strictly-upper entries read row-major for the walk, sites
// 2..n for East) are base-q digits, first coordinate most significant.
class StateSpace {
public:
    static StateSpace enumerate(const ModelSpec& model, std::size_t cap = kDefaultCap);

    const ModelSpec& model() const { return model_; }
    std::size_t size() const { return size_; }
    int digits() const { return digits_; }
    std::uint32_t base() const { return base_; }

    UnitriMatrix matrix_at(std::size_t idx) const;
    std::size_t index_of(const UnitriMatrix& x) const;
    EastState east_at(std::size_t idx) const;
    std::size_t index_of(const EastState& h) const;

private:
    ModelSpec model_;
    std::size_t size_ = 0;
    int digits_ = 0;
    std::uint32_t base_ = 2;
};

} // namespace utw
