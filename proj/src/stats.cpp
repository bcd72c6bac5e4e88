#include "unitriwalk/stats.hpp"

#include <cmath>

#include "unitriwalk/errors.hpp"

namespace utw {

namespace {

// Lentz continued fraction for the incomplete beta
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("reg_inc_beta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double inv_reg_inc_beta(double a, double b, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (reg_inc_beta(a, b, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

static void check_ci_args(std::uint64_t k, std::uint64_t n, double confidence) {
    if (n == 0) throw InvalidArgument("confidence interval needs n >= 1");
    if (k > n) throw InvalidArgument("successes exceed sample count");
    if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must be in (0,1)");
}

BinomialCI clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
    check_ci_args(k, n, confidence);
    const double alpha = 1.0 - confidence;
    BinomialCI ci;
    ci.point = static_cast<double>(k) / static_cast<double>(n);
    ci.confidence = confidence;
    ci.samples = n;
    ci.successes = k;
    ci.lower = (k == 0) ? 0.0
                        : inv_reg_inc_beta(static_cast<double>(k), static_cast<double>(n - k + 1), alpha / 2.0);
    ci.upper = (k == n) ? 1.0
                        : inv_reg_inc_beta(static_cast<double>(k + 1), static_cast<double>(n - k), 1.0 - alpha / 2.0);
    return ci;
}

double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double confidence) {
    check_ci_args(k, n, confidence);
    if (k == n) return 1.0;
    return inv_reg_inc_beta(static_cast<double>(k + 1), static_cast<double>(n - k), confidence);
}

double clopper_pearson_lower(std::uint64_t k, std::uint64_t n, double confidence) {
    check_ci_args(k, n, confidence);
    if (k == 0) return 0.0;
    return inv_reg_inc_beta(static_cast<double>(k), static_cast<double>(n - k + 1), 1.0 - confidence);
}

double binom_tail_geq(std::uint64_t n, double p, std::uint64_t r) {
    if (r == 0) return 1.0;
    if (r > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double s = 0.0;
    for (std::uint64_t k = r; k <= n; ++k) {
        const double lw = std::lgamma(static_cast<double>(n) + 1.0) -
                          std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0) +
                          static_cast<double>(k) * std::log(p) +
                          static_cast<double>(n - k) * std::log1p(-p);
        s += std::exp(lw);
    }
    return s < 1.0 ? s : 1.0;
}

} // namespace utw
