#pragma once

#include <cstdint>
#include <vector>

#include "unitriwalk/state_space.hpp"

namespace utw {

// CTMC generator in CSR form, columns sorted per row, diagonal included.
// Off-diagonals >= 0, rows sum to 0.
struct SparseGenerator {
    std::size_t size = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    double entry(std::size_t x, std::size_t y) const;
    double max_exit_rate() const;
    // w = v L for a row vector v
    std::vector<double> left_apply(const std::vector<double>& v) const;
};

SparseGenerator build_generator(const StateSpace& space);

// Uniform for the walk and the q-state East model, product Bernoulli(p) for
// the binary East model.
std::vector<double> stationary_dist(const StateSpace& space);

struct StationarityReport {
    double stationarity_residual;  // max norm of pi L
    double reversibility_residual; // max |pi_x L_xy - pi_y L_yx|
};

StationarityReport stationarity_residual(const SparseGenerator& gen, const std::vector<double>& pi);

} // namespace utw
