/* unitriwalk C API: simulation and exact analysis of the random walk on
 * upper triangular matrices over Z_q, East-model dynamics, and Monte-Carlo
 * mixing certificates. Opaque handles + status codes; strings returned by
 * the library are freed with utw_free_string(). Thread-safe: handles are
 * not shared state, errors are reported per call via the out parameters
 * and utw_last_error() is thread-local. */

#ifndef UNITRIWALK_H
#define UNITRIWALK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UTW_API __declspec(dllexport)
#else
#define UTW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum utw_status {
    UTW_OK = 0,
    UTW_ERR_INVALID_ARGUMENT = 1,
    UTW_ERR_CAP_EXCEEDED = 2,
    UTW_ERR_NOT_LUMPABLE = 3,
    UTW_ERR_DEGENERATE = 4,
    UTW_ERR_BRACKET_NOT_FOUND = 5,
    UTW_ERR_IO = 6,
    UTW_ERR_INTERNAL = 7
} utw_status;

UTW_API const char* utw_version(void);

/* Last error message of the calling thread (valid until the next failing
 * call on the same thread). */
UTW_API const char* utw_last_error(void);

UTW_API void utw_free_string(char* s);

/* ---- event logs and trajectories ---- */

typedef struct utw_eventlog utw_eventlog;

UTW_API utw_status utw_eventlog_sample(int n, uint32_t q, double T, uint64_t seed,
                                       utw_eventlog** out);
UTW_API utw_status utw_eventlog_from_tsv(const char* text, utw_eventlog** out);
UTW_API utw_status utw_eventlog_to_tsv(const utw_eventlog* log, char** out);
UTW_API utw_status utw_eventlog_event_count(const utw_eventlog* log, uint64_t* out);
UTW_API void utw_eventlog_free(utw_eventlog* log);

typedef struct utw_matrix utw_matrix;

UTW_API utw_status utw_evolve_forward(const utw_eventlog* log, utw_matrix** out);
UTW_API utw_status utw_matrix_dim(const utw_matrix* m, int* n, uint32_t* q);
UTW_API utw_status utw_matrix_entry(const utw_matrix* m, int i, int j, uint32_t* out);
/* row-major decimal digits, rows separated by '/' */
UTW_API utw_status utw_matrix_debug_string(const utw_matrix* m, char** out);
UTW_API void utw_matrix_free(utw_matrix* m);

/* ---- span event and certificates ---- */

UTW_API utw_status utw_span_check(const utw_eventlog* log, int* spanned, double* first_span_time,
                                  int* final_rank);

/* point, lower, upper of the exact binomial CI on P(span fails) */
UTW_API utw_status utw_estimate_span_failure(int n, uint32_t q, double T, uint64_t samples,
                                             double confidence, uint64_t seed, double ci_out[3]);

/* CertificateReport as JSON: {n, q, T, base_n0, base_tv, levels, bound, delta} */
UTW_API utw_status utw_certified_tv_upper(int n, uint32_t q, double T, int base_n0,
                                          uint64_t samples, double delta, uint64_t seed,
                                          size_t cap, char** report_json);

/* out[0] = certified lower bound on d_n(T), out[1] = point estimate,
 * out[2] = best threshold r */
UTW_API utw_status utw_tv_lower(int n, uint32_t q, double T, uint64_t samples, double delta,
                                uint64_t seed, double out[3]);

/* ---- exact analysis ---- */

/* out[0] = spectral gap, out[1] = gap residual, out[2] = exact tmix(eps),
 * out[3] = stationarity residual, out[4] = reversibility residual */
UTW_API utw_status utw_exact_group_walk(int n, uint32_t q, double eps, size_t cap, double out[5]);

/* flavor: 0 = q-state (q_or_p is the prime q), 1 = binary (q_or_p is p) */
UTW_API utw_status utw_east_gap(int flavor, int n, double q_or_p, size_t cap, double* gap,
                                double* residual);

/* ---- experiment harness ---- */

/* Runs an experiment config (JSON; see README for the schema), writes the
 * configured outputs, and returns a short JSON summary. */
UTW_API utw_status utw_run_config(const char* config_json, char** summary_json);

/* Fits log T* = log C + alpha log n + beta log log q from a results CSV.
 * Returns JSON {C, alpha, beta, beta_fitted, max_residual, rows}. */
UTW_API utw_status utw_scaling_fit_file(const char* csv_path, char** fit_json);

#ifdef __cplusplus
}
#endif

#endif /* UNITRIWALK_H */
