#include "unitriwalk.h"

#include <cstring>
#include <string>

#include "json.hpp"

#include "unitriwalk/harness.hpp"

namespace {

thread_local std::string g_last_error;

utw_status set_error(utw_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
utw_status guarded(Fn&& fn) {
    try {
        fn();
        return UTW_OK;
    } catch (const utw::CapExceeded& e) {
        return set_error(UTW_ERR_CAP_EXCEEDED, e.what());
    } catch (const utw::NotLumpable& e) {
        return set_error(UTW_ERR_NOT_LUMPABLE, e.what());
    } catch (const utw::DegenerateFit& e) {
        return set_error(UTW_ERR_DEGENERATE, e.what());
    } catch (const utw::BracketNotFound& e) {
        return set_error(UTW_ERR_BRACKET_NOT_FOUND, e.what());
    } catch (const utw::IoError& e) {
        return set_error(UTW_ERR_IO, e.what());
    } catch (const utw::InvalidArgument& e) {
        return set_error(UTW_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return set_error(UTW_ERR_INTERNAL, e.what());
    }
}

} // namespace

struct utw_eventlog {
    utw::EventLog log;
};

struct utw_matrix {
    utw::UnitriMatrix m;
};

extern "C" {

const char* utw_version(void) { return "unitriwalk 1.0.0"; }

const char* utw_last_error(void) { return g_last_error.c_str(); }

void utw_free_string(char* s) { delete[] s; }

utw_status utw_eventlog_sample(int n, uint32_t q, double T, uint64_t seed, utw_eventlog** out) {
    if (!out) return set_error(UTW_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] { *out = new utw_eventlog{utw::sample_event_log(n, q, T, seed)}; });
}

utw_status utw_eventlog_from_tsv(const char* text, utw_eventlog** out) {
    if (!text || !out) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new utw_eventlog{utw::EventLog::from_tsv(text)}; });
}

utw_status utw_eventlog_to_tsv(const utw_eventlog* log, char** out) {
    if (!log || !out) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(log->log.to_tsv()); });
}

utw_status utw_eventlog_event_count(const utw_eventlog* log, uint64_t* out) {
    if (!log || !out) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    *out = log->log.events.size();
    return UTW_OK;
}

void utw_eventlog_free(utw_eventlog* log) { delete log; }

utw_status utw_evolve_forward(const utw_eventlog* log, utw_matrix** out) {
    if (!log || !out) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new utw_matrix{utw::evolve_forward(log->log)}; });
}

utw_status utw_matrix_dim(const utw_matrix* m, int* n, uint32_t* q) {
    if (!m || !n || !q) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    *n = m->m.n();
    *q = m->m.q();
    return UTW_OK;
}

utw_status utw_matrix_entry(const utw_matrix* m, int i, int j, uint32_t* out) {
    if (!m || !out) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    if (i < 1 || j < 1 || i > m->m.n() || j > m->m.n()) {
        return set_error(UTW_ERR_INVALID_ARGUMENT, "matrix index out of range");
    }
    *out = m->m.at(i, j);
    return UTW_OK;
}

utw_status utw_matrix_debug_string(const utw_matrix* m, char** out) {
    if (!m || !out) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(m->m.debug_string()); });
}

void utw_matrix_free(utw_matrix* m) { delete m; }

utw_status utw_span_check(const utw_eventlog* log, int* spanned, double* first_span_time,
                          int* final_rank) {
    if (!log || !spanned || !first_span_time || !final_rank) {
        return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const utw::SpanRecord rec = utw::span_event_check(utw::split(log->log));
        *spanned = rec.spanned ? 1 : 0;
        *first_span_time = rec.first_span_time;
        *final_rank = rec.final_rank;
    });
}

utw_status utw_estimate_span_failure(int n, uint32_t q, double T, uint64_t samples,
                                     double confidence, uint64_t seed, double ci_out[3]) {
    if (!ci_out) return set_error(UTW_ERR_INVALID_ARGUMENT, "ci_out is null");
    return guarded([&] {
        const utw::BinomialCI ci = utw::estimate_span_failure(n, q, T, samples, confidence, seed);
        ci_out[0] = ci.point;
        ci_out[1] = ci.lower;
        ci_out[2] = ci.upper;
    });
}

utw_status utw_certified_tv_upper(int n, uint32_t q, double T, int base_n0, uint64_t samples,
                                  double delta, uint64_t seed, size_t cap, char** report_json) {
    if (!report_json) return set_error(UTW_ERR_INVALID_ARGUMENT, "report_json is null");
    return guarded([&] {
        const utw::CertificateReport rep =
            utw::certified_tv_upper(n, q, T, base_n0, samples, delta, seed, cap);
        *report_json = dup_string(rep.to_json());
    });
}

utw_status utw_tv_lower(int n, uint32_t q, double T, uint64_t samples, double delta, uint64_t seed,
                        double out[3]) {
    if (!out) return set_error(UTW_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        const utw::TvLowerBound lb = utw::tv_lower_statistic(n, q, T, samples, seed, delta);
        out[0] = lb.certified;
        out[1] = lb.point;
        out[2] = lb.threshold;
    });
}

utw_status utw_exact_group_walk(int n, uint32_t q, double eps, size_t cap, double out[5]) {
    if (!out) return set_error(UTW_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        const utw::StateSpace space =
            utw::StateSpace::enumerate(utw::ModelSpec{utw::ModelKind::GroupWalk, n, q, 0.5}, cap);
        const utw::SparseGenerator gen = utw::build_generator(space);
        const std::vector<double> pi = utw::stationary_dist(space);
        const utw::SpectralResult sg = utw::spectral_gap(gen, pi);
        const utw::StationarityReport st = utw::stationarity_residual(gen, pi);
        out[0] = sg.gap;
        out[1] = sg.residual;
        out[2] = utw::exact_tmix(space, gen, pi, eps);
        out[3] = st.stationarity_residual;
        out[4] = st.reversibility_residual;
    });
}

utw_status utw_east_gap(int flavor, int n, double q_or_p, size_t cap, double* gap, double* residual) {
    if (!gap || !residual) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        utw::ModelSpec spec;
        if (flavor == 1) {
            spec = utw::ModelSpec{utw::ModelKind::EastBinary, n, 2, q_or_p};
        } else {
            spec = utw::ModelSpec{utw::ModelKind::EastQ, n, static_cast<uint32_t>(q_or_p), 0.5};
        }
        const utw::StateSpace space = utw::StateSpace::enumerate(spec, cap);
        const utw::SparseGenerator gen = utw::build_generator(space);
        const std::vector<double> pi = utw::stationary_dist(space);
        const utw::SpectralResult sg = utw::spectral_gap(gen, pi);
        *gap = sg.gap;
        *residual = sg.residual;
    });
}

utw_status utw_run_config(const char* config_json, char** summary_json) {
    if (!config_json || !summary_json) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const utw::ExperimentConfig cfg = utw::ExperimentConfig::from_json(config_json);
        const utw::RunResult result = utw::run(cfg);
        utw::write_outputs(result);
        nlohmann::json summary;
        summary["kind"] = cfg.kind;
        summary["config_hash"] = result.hash;
        summary["rows"] = result.rows.size();
        summary["out"] = cfg.out;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : result.rows) {
            nlohmann::json row;
            row["n"] = r.n;
            row["q_or_p"] = r.q_or_p;
            if (r.has_T) row["T"] = r.T;
            row["quantity"] = r.quantity;
            row["value"] = r.value;
            row["uncertainty"] = r.uncertainty;
            rows.push_back(row);
        }
        summary["results"] = rows;
        *summary_json = dup_string(summary.dump(2));
    });
}

utw_status utw_scaling_fit_file(const char* csv_path, char** fit_json) {
    if (!csv_path || !fit_json) return set_error(UTW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto rows = utw::read_scaling_rows_csv(csv_path);
        const utw::ScalingFit fit = utw::scaling_fit(rows);
        nlohmann::json j = {{"C", fit.c},
                            {"alpha", fit.alpha},
                            {"beta", fit.beta},
                            {"beta_fitted", fit.beta_fitted},
                            {"max_residual", fit.max_residual},
                            {"rows", fit.rows}};
        *fit_json = dup_string(j.dump(2));
    });
}

} // extern "C"
