#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "unitriwalk/generator.hpp"

namespace utw {

// mu0 e^{tL} by uniformization (Jensen's method); Poisson series truncated at
// tail mass <= tail_mass on both ends.
std::vector<double> transient_dist(const SparseGenerator& gen, const std::vector<double>& mu0,
                                   double t, double tail_mass = 1e-14);

double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

// ||mu0 e^{tL} - pi||_tv at each time; nonincreasing in t.
std::vector<double> tv_curve(const SparseGenerator& gen, const std::vector<double>& mu0,
                             const std::vector<double>& pi, const std::vector<double>& times,
                             double tail_mass = 1e-14);

// Discrete chain P = I + L/num_clocks (one uniform clock per step); TV after
// each requested step count.
std::vector<double> discrete_tv_curve(const SparseGenerator& gen, int num_clocks,
                                      const std::vector<double>& mu0, const std::vector<double>& pi,
                                      const std::vector<std::uint64_t>& steps);

// mu0 P^steps for the same discrete chain.
std::vector<double> discrete_transient(const SparseGenerator& gen, int num_clocks,
                                       const std::vector<double>& mu0, std::uint64_t steps);

// Smallest t with max-over-start TV <= eps, bisection to t_tol. The group
// walk is vertex-transitive, so a single start (the identity) suffices there;
// East flavors scan every start.
double exact_tmix(const StateSpace& space, const SparseGenerator& gen, const std::vector<double>& pi,
                  double eps, double t_tol = 1e-6);

struct SpectralResult {
    double gap = 0.0;
    std::string method; // "dense-eigen" | "iterative"
    double residual = 0.0;
};

// Second-smallest eigenvalue of -L on the symmetrization D^{1/2}(-L)D^{-1/2}.
// Dense solver up to dense_limit states, Lanczos with deflation of sqrt(pi)
// above. Throws InvalidArgument if (L, pi) is not reversible.
SpectralResult spectral_gap(const SparseGenerator& gen, const std::vector<double>& pi,
                            std::size_t dense_limit = 2000);

struct LumpResult {
    bool lumpable = false;
    std::size_t classes = 0;
    std::vector<double> lumped; // row-major classes x classes generator
    // violating pair when not lumpable: states a, b in one class whose rates
    // into class bad_class differ
    std::size_t state_a = 0, state_b = 0, bad_class = 0;
    double discrepancy = 0.0;

    double at(std::size_t i, std::size_t j) const { return lumped[i * classes + j]; }
};

// Dynkin lumpability: class-to-class exit rates constant within each source
// class (tolerance tol). Returns the lumped generator or the violation.
LumpResult lump_check(const SparseGenerator& gen, const std::vector<std::size_t>& partition,
                      std::size_t num_classes, double tol = 1e-12);

// state -> binary East index under the zero/nonzero projection
std::vector<std::size_t> psi_partition(const StateSpace& qspace);
// state -> q-state East index of column j read bottom-up (diagonal is the
// pinned site)
std::vector<std::size_t> column_partition(const StateSpace& walk_space, int j);

// Dense row-major copy of a sparse generator (for lumped-vs-direct checks).
std::vector<double> dense_generator(const SparseGenerator& gen);

struct GapRow {
    int n;
    SpectralResult res;
};

std::vector<GapRow> gap_table(ModelKind flavor, std::uint32_t q, double p, int n_lo, int n_hi,
                              std::size_t cap = kDefaultCap, std::size_t dense_limit = 2000);

// CSV emission: "model,n,q_or_p,quantity,value,residual"
struct ExactRow {
    std::string model;
    int n;
    double q_or_p;
    std::string quantity;
    double value;
    double residual;
};

// gap, tmix(eps), stationarity and reversibility rows for one model
std::vector<ExactRow> exact_summary(const StateSpace& space, const SparseGenerator& gen,
                                    const std::vector<double>& pi, double eps);
std::string exact_rows_csv(const std::vector<ExactRow>& rows);

} // namespace utw
