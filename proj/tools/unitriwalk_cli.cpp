// Experiment runner over the unitriwalk C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "unitriwalk.h"

namespace {

struct CommonOpts {
    std::vector<int> n;
    std::vector<std::uint32_t> q;
    std::vector<double> p;
    std::vector<double> T;
    std::uint64_t samples = 10000;
    double delta = 0.01;
    std::uint64_t seed = 1;
    std::uint64_t cap = 65536;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--n", o.n, "matrix sizes / chain lengths")->required();
    cmd->add_option("--q", o.q, "field sizes (prime)");
    cmd->add_option("--p", o.p, "binary East parameters in (0,1)");
    cmd->add_option("--T", o.T, "time horizons");
    cmd->add_option("--samples", o.samples, "Monte Carlo sample count");
    cmd->add_option("--delta", o.delta, "confidence budget");
    cmd->add_option("--seed", o.seed, "base RNG seed");
    cmd->add_option("--cap", o.cap, "state-space cap for exact analysis");
    cmd->add_option("--out", o.out, "output file path");
    cmd->add_option("--format", o.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

nlohmann::json base_config(const std::string& kind, const CommonOpts& o) {
    nlohmann::json cfg;
    cfg["kind"] = kind;
    cfg["n"] = o.n;
    if (!o.q.empty()) cfg["q"] = o.q;
    if (!o.p.empty()) cfg["p"] = o.p;
    if (!o.T.empty()) cfg["T"] = o.T;
    cfg["samples"] = o.samples;
    cfg["delta"] = o.delta;
    cfg["seed"] = o.seed;
    cfg["cap"] = o.cap;
    cfg["out"] = o.out;
    cfg["format"] = o.format;
    return cfg;
}

int run_config(const nlohmann::json& cfg, bool quiet) {
    char* summary = nullptr;
    const utw_status st = utw_run_config(cfg.dump().c_str(), &summary);
    if (st != UTW_OK) {
        std::cerr << "error: " << utw_last_error() << "\n";
        return st == UTW_ERR_INVALID_ARGUMENT ? 2 : 1;
    }
    if (!quiet) std::cout << summary << "\n";
    utw_free_string(summary);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"unitriwalk: upper triangular matrix walk laboratory"};
    app.require_subcommand(1);
    bool quiet = false;

    CommonOpts sim, exact, cert, east, scan, lower;
    int base_n0 = 2;
    double eps = 0.18393972058572117;
    double t_cap = 4096.0;
    std::string flavor = "qstate";
    std::string dump_logs;
    std::uint64_t dump_count = 1;
    std::string fit_in, fit_out;

    auto* c_sim = app.add_subcommand("simulate", "trajectory batches with MC-vs-exact TV rows");
    add_common(c_sim, sim);
    c_sim->add_option("--dump-logs", dump_logs, "directory for event-log dumps");
    c_sim->add_option("--dump-count", dump_count, "number of logs to dump per configuration");

    auto* c_exact = app.add_subcommand("exact", "gap, tmix and stationarity for small walks");
    add_common(c_exact, exact);
    c_exact->add_option("--eps", eps, "mixing threshold (default 1/2e)");

    auto* c_cert = app.add_subcommand("certify", "certified TV upper bound via span events");
    add_common(c_cert, cert);
    c_cert->add_option("--base-n0", base_n0, "exact base level");

    auto* c_east = app.add_subcommand("east-gap", "East-model spectral gap tables");
    add_common(c_east, east);
    c_east->add_option("--flavor", flavor, "qstate or binary")
        ->check(CLI::IsMember({"qstate", "binary"}));

    auto* c_scan = app.add_subcommand("tmix-scan", "certified mixing-time search and scaling fit");
    add_common(c_scan, scan);
    c_scan->add_option("--base-n0", base_n0, "exact base level");
    c_scan->add_option("--eps", eps, "mixing threshold (default 1/2e)");
    c_scan->add_option("--t-cap", t_cap, "largest horizon tried while bracketing");

    auto* c_lower = app.add_subcommand("lower-bound", "distinguishing-statistic TV lower bound");
    add_common(c_lower, lower);

    auto* c_fit = app.add_subcommand("fit", "scaling fit from a results CSV");
    c_fit->add_option("--in", fit_in, "results CSV with tmix_upper_T_star rows (or n,q,T* triples)")
        ->required();
    c_fit->add_option("--out", fit_out, "write the fit JSON here as well");

    for (auto* sub : app.get_subcommands(nullptr)) {
        sub->add_flag("--quiet", quiet, "suppress the result summary on stdout");
    }

    CLI11_PARSE(app, argc, argv);

    if (c_sim->parsed()) {
        auto cfg = base_config("simulate", sim);
        if (!dump_logs.empty()) {
            cfg["dump_logs"] = dump_logs;
            cfg["dump_count"] = dump_count;
        }
        return run_config(cfg, quiet);
    }
    if (c_exact->parsed()) {
        auto cfg = base_config("exact", exact);
        cfg["eps"] = eps;
        return run_config(cfg, quiet);
    }
    if (c_cert->parsed()) {
        auto cfg = base_config("certify", cert);
        cfg["base_n0"] = base_n0;
        return run_config(cfg, quiet);
    }
    if (c_east->parsed()) {
        auto cfg = base_config("east-gap", east);
        cfg["flavor"] = flavor;
        return run_config(cfg, quiet);
    }
    if (c_scan->parsed()) {
        auto cfg = base_config("scaling", scan);
        cfg["base_n0"] = base_n0;
        cfg["eps"] = eps;
        cfg["t_cap"] = t_cap;
        return run_config(cfg, quiet);
    }
    if (c_lower->parsed()) {
        return run_config(base_config("lower-bound", lower), quiet);
    }
    if (c_fit->parsed()) {
        char* fit_json = nullptr;
        const utw_status st = utw_scaling_fit_file(fit_in.c_str(), &fit_json);
        if (st != UTW_OK) {
            std::cerr << "error: " << utw_last_error() << "\n";
            return st == UTW_ERR_INVALID_ARGUMENT || st == UTW_ERR_DEGENERATE ? 2 : 1;
        }
        if (!quiet) std::cout << fit_json << "\n";
        if (!fit_out.empty()) {
            std::ofstream f(fit_out, std::ios::trunc);
            f << fit_json << "\n";
        }
        utw_free_string(fit_json);
        return 0;
    }
    return 0;
}
