#include "unitriwalk/state_space.hpp"

#include <string>

namespace utw {

void ModelSpec::validate() const {
    switch (kind) {
    case ModelKind::GroupWalk:
        if (n < 2) throw InvalidArgument("group walk requires n >= 2");
        require_prime(q);
        break;
    case ModelKind::EastBinary:
        if (n < 1) throw InvalidArgument("East model requires n >= 1");
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("binary East requires 0 < p < 1");
        break;
    case ModelKind::EastQ:
        if (n < 1) throw InvalidArgument("East model requires n >= 1");
        require_prime(q);
        break;
    }
}

StateSpace StateSpace::enumerate(const ModelSpec& model, std::size_t cap) {
    model.validate();
    StateSpace s;
    s.model_ = model;
    switch (model.kind) {
    case ModelKind::GroupWalk:
        s.digits_ = model.n * (model.n - 1) / 2;
        s.base_ = model.q;
        break;
    case ModelKind::EastBinary:
        s.digits_ = model.n - 1;
        s.base_ = 2;
        break;
    case ModelKind::EastQ:
        s.digits_ = model.n - 1;
        s.base_ = model.q;
        break;
    }
    std::size_t size = 1;
    for (int d = 0; d < s.digits_; ++d) {
        if (size > cap / s.base_) {
            throw CapExceeded("state space exceeds cap of " + std::to_string(cap) +
                              " states; raise the cap or use Monte Carlo");
        }
        size *= s.base_;
    }
    if (size > cap) {
        throw CapExceeded("state space exceeds cap of " + std::to_string(cap) + " states");
    }
    s.size_ = size;
    return s;
}

UnitriMatrix StateSpace::matrix_at(std::size_t idx) const {
    if (model_.kind != ModelKind::GroupWalk) throw InvalidArgument("matrix_at on non-walk space");
    const int n = model_.n;
    UnitriMatrix x(n, model_.q);
    // digits are the strictly-upper entries row-major, first one most significant
    std::size_t rem = idx;
    std::size_t place = size_ / base_;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const auto digit = static_cast<std::uint32_t>(rem / place);
            x.set_upper(i, j, digit);
            rem %= place;
            if (place > 1) place /= base_;
        }
    }
    return x;
}

std::size_t StateSpace::index_of(const UnitriMatrix& x) const {
    if (model_.kind != ModelKind::GroupWalk) throw InvalidArgument("index_of(matrix) on non-walk space");
    if (x.n() != model_.n || x.q() != model_.q) throw InvalidArgument("matrix does not belong to this space");
    std::size_t idx = 0;
    for (int i = 1; i <= model_.n; ++i) {
        for (int j = i + 1; j <= model_.n; ++j) {
            idx = idx * base_ + x.at(i, j);
        }
    }
    return idx;
}

EastState StateSpace::east_at(std::size_t idx) const {
    if (model_.kind == ModelKind::GroupWalk) throw InvalidArgument("east_at on walk space");
    EastState h = EastState::all_empty(model_.n);
    std::size_t rem = idx;
    for (int i = model_.n; i >= 2; --i) {
        h.set(i, static_cast<std::uint32_t>(rem % base_));
        rem /= base_;
    }
    return h;
}

std::size_t StateSpace::index_of(const EastState& h) const {
    if (model_.kind == ModelKind::GroupWalk) throw InvalidArgument("index_of(east) on walk space");
    if (h.n != model_.n) throw InvalidArgument("state does not belong to this space");
    std::size_t idx = 0;
    for (int i = 2; i <= model_.n; ++i) idx = idx * base_ + h.at(i);
    return idx;
}

} // namespace utw
