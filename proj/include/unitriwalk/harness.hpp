#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unitriwalk/certify.hpp"

namespace utw {

struct CertParams {
    int base_n0 = 2;
    std::uint64_t samples = 10000;
    double delta = 0.01;
    std::uint64_t seed = 1;
    std::size_t cap = kDefaultCap;
};

struct TmixSearchResult {
    double t_star = 0.0;       // smallest tested T with certified bound <= eps
    double bound_at_t_star = 0.0;
    double t_low = 0.0;        // largest tested T with certified bound > eps
    double bound_at_t_low = 0.0;
    int evaluations = 0;
};

// Bracket by doubling, then bisection to rel_tol in T. Every evaluation runs
// a fresh certificate (own seed stream), so the bracket invariant
// bound(t_low) > eps >= bound(t_star) holds for the recorded values.
TmixSearchResult tmix_search(int n, std::uint32_t q, double eps, const CertParams& cp,
                             double rel_tol = 0.05, double t_cap = 4096.0);

struct ScalingRow {
    int n;
    std::uint32_t q;
    double t_star;
};

// Least squares for log T* = log C + alpha log n + beta log log q. The beta
// term needs at least two distinct q values; otherwise it is pinned to 0.
struct ScalingFit {
    double c = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    bool beta_fitted = false;
    double max_residual = 0.0; // in log space
    std::size_t rows = 0;
};

ScalingFit scaling_fit(const std::vector<ScalingRow>& rows);

struct ExperimentConfig {
    std::string kind; // simulate | exact | certify | east-gap | scaling | lower-bound
    std::vector<int> n;
    std::vector<std::uint32_t> q;
    std::vector<double> p; // east-gap binary flavor
    std::vector<double> T;
    std::uint64_t samples = 10000;
    double delta = 0.01;
    std::uint64_t seed = 1;
    std::size_t cap = kDefaultCap;
    int base_n0 = 2;
    double eps = 0.18393972058572117; // 1/(2e)
    double t_cap = 4096.0;
    std::string flavor = "qstate"; // east-gap: qstate | binary
    std::string out;
    std::string format = "csv"; // csv | json
    std::string dump_logs;      // simulate: directory for event-log dumps
    std::uint64_t dump_count = 1;

    void validate() const; // throws InvalidArgument naming the offending field
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

std::string config_hash(const ExperimentConfig& cfg);

struct ResultRow {
    std::string kind;
    int n = 0;
    double q_or_p = 0.0;
    double T = 0.0;
    bool has_T = false;
    std::string quantity;
    double value = 0.0;
    double uncertainty = 0.0;
    std::uint64_t seed = 0;
    double walltime_s = 0.0;
};

struct RunResult {
    ExperimentConfig config;
    std::string hash;
    std::vector<ResultRow> rows;
    std::vector<CertificateReport> reports; // certify
    ScalingFit fit;                         // scaling
    bool has_fit = false;

    std::string to_csv() const;
    std::string to_json() const;
};

RunResult run(const ExperimentConfig& cfg);

// Atomic write (temp file + rename) of the configured format to cfg.out.
// No-op if cfg.out is empty.
void write_outputs(const RunResult& result);

// Rows with quantity "tmix_upper_T_star" from a results CSV; also accepts
// bare "n,q,t_star" triples.
std::vector<ScalingRow> read_scaling_rows_csv(const std::string& path);

} // namespace utw
