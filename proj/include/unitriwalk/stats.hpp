#pragma once

#include <cstdint>

namespace utw {

// Regularized incomplete beta I_x(a, b) and its inverse in x.
double reg_inc_beta(double a, double b, double x);
double inv_reg_inc_beta(double a, double b, double p);

// Exact binomial (Clopper-Pearson) confidence interval.
struct BinomialCI {
    double point = 0.0;
    double lower = 0.0;
    double upper = 1.0;
    double confidence = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t successes = 0;
};

BinomialCI clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence); // two-sided
double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double confidence); // one-sided
double clopper_pearson_lower(std::uint64_t k, std::uint64_t n, double confidence); // one-sided

// P(Binomial(n, p) >= r), exact term sum.
double binom_tail_geq(std::uint64_t n, double p, std::uint64_t r);

} // namespace utw
