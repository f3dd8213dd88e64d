// Command-line front end: generate targets, run single estimates, sweep,
// print bound tables, or run the acceptance suite.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qfn/acceptance.hpp"
#include "qfn/bounds.hpp"
#include "qfn/harness.hpp"
#include "qfn/random.hpp"
#include "qfn/sampling.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// config file first, then explicit flags on top
void add_config_flags(CLI::App* cmd, qfn::ExperimentConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its keys");
    cmd->add_option_function<std::string>(
        "--method", [&](const std::string& m) {
            cfg.method = m == "WS" ? qfn::Method::WS : qfn::Method::PS;
        },
        "PS or WS");
    cmd->add_option_function<std::string>(
        "--regime", [&](const std::string& r) {
            cfg.regime = r == "Heisenberg" ? qfn::Regime::Heisenberg : qfn::Regime::SQL;
        },
        "SQL or Heisenberg");
    cmd->add_option("--q", cfg.q, "smoothness degree");
    cmd->add_option("--M", cfg.M, "smoothness budget");
    cmd->add_option("--L", cfg.L, "period");
    cmd->add_option("--G", cfg.G, "grid size");
    cmd->add_option("--N", cfg.N_list, "particle budgets");
    cmd->add_option("--trials", cfg.trials, "trials per N");
    cmd->add_option("--c4", cfg.constants.c4);
    cmd->add_option("--c5", cfg.constants.c5);
    cmd->add_option("--c6", cfg.constants.c6);
    cmd->add_option("--kernel-m", cfg.kernel_m, "kernel order (-1: from q)");
    cmd->add_option("--constraint-fraction", cfg.constraint_fraction);
    cmd->add_option_function<double>(
        "--amplitude-cap", [&](double v) { cfg.amplitude_cap = v; });
    cmd->add_option("--records", cfg.records_path, "records CSV output path");
    cmd->add_option("--fits", cfg.fits_path, "fit JSON output path");
    cmd->add_option("--svg", cfg.svg_path, "scatter SVG output path");
}

qfn::ExperimentConfig load_config(const std::string& config_path,
                                  const qfn::ExperimentConfig& overrides,
                                  const CLI::App* cmd) {
    if (config_path.empty()) return overrides;
    auto cfg = qfn::config_from_json_text(read_file(config_path));
    // apply only the flags the user actually passed
    auto touched = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (touched("--method")) cfg.method = overrides.method;
    if (touched("--regime")) cfg.regime = overrides.regime;
    if (touched("--q")) cfg.q = overrides.q;
    if (touched("--M")) cfg.M = overrides.M;
    if (touched("--L")) cfg.L = overrides.L;
    if (touched("--G")) cfg.G = overrides.G;
    if (touched("--N")) cfg.N_list = overrides.N_list;
    if (touched("--trials")) cfg.trials = overrides.trials;
    if (touched("--c4")) cfg.constants.c4 = overrides.constants.c4;
    if (touched("--c5")) cfg.constants.c5 = overrides.constants.c5;
    if (touched("--c6")) cfg.constants.c6 = overrides.constants.c6;
    if (touched("--kernel-m")) cfg.kernel_m = overrides.kernel_m;
    if (touched("--constraint-fraction"))
        cfg.constraint_fraction = overrides.constraint_fraction;
    if (touched("--amplitude-cap")) cfg.amplitude_cap = overrides.amplitude_cap;
    if (touched("--records")) cfg.records_path = overrides.records_path;
    if (touched("--fits")) cfg.fits_path = overrides.fits_path;
    if (touched("--svg")) cfg.svg_path = overrides.svg_path;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and bound calculator for estimating spatially varying phases"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit a random in-class target as CSV");
    double gen_q = 1.0, gen_M = 1.0, gen_cap = 0.0, gen_fraction = 0.9;
    int gen_G = 4096;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_spectrum_out;
    gen->add_option("--q", gen_q);
    gen->add_option("--M", gen_M);
    gen->add_option("--G", gen_G);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--amplitude-cap", gen_cap, "0 disables the cap");
    gen->add_option("--constraint-fraction", gen_fraction);
    gen->add_option("--out", gen_out, "CSV path (default stdout)");
    gen->add_option("--spectrum", gen_spectrum_out, "optional spectrum JSON path");

    // estimate
    auto* est = app.add_subcommand("estimate", "run one trial, JSON record to stdout");
    qfn::ExperimentConfig est_cfg;
    std::string est_config_path;
    long long est_N = 1024, est_trial = 0;
    est_cfg.N_list = {est_N};
    est_cfg.trials = 1;
    add_config_flags(est, est_cfg, est_config_path);
    est->add_option("--budget", est_N, "particle budget N");
    est->add_option("--trial", est_trial, "trial index");
    est->add_option("--seed", est_cfg.seed, "master seed");

    // sweep
    auto* swp = app.add_subcommand("sweep", "full Monte Carlo sweep");
    qfn::ExperimentConfig swp_cfg;
    std::string swp_config_path;
    bool swp_serial = false;
    add_config_flags(swp, swp_cfg, swp_config_path);
    auto* seed_opt = swp->add_option("--seed", swp_cfg.seed, "master seed (required)");
    swp->add_flag("--serial", swp_serial, "use the serial reference driver");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "print bound tables as CSV");
    double bnd_q = 1.0, bnd_M = 1.0;
    std::vector<long long> bnd_N = {1000};
    std::string bnd_json;
    bnd->add_option("--q", bnd_q);
    bnd->add_option("--M", bnd_M);
    bnd->add_option("--N", bnd_N, "budgets to tabulate");
    bnd->add_option("--json", bnd_json, "also write a BoundReport JSON for the first N");

    // verify
    auto* ver = app.add_subcommand("verify", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const qfn::SmoothnessClass cls(gen_q, gen_M);
            std::optional<double> cap;
            if (gen_cap > 0.0) cap = gen_cap;
            const auto sample =
                qfn::sample_target(cls, gen_G, cap, gen_seed, gen_fraction);
            const auto csv = qfn::grid_to_csv(sample.f);
            if (gen_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(gen_out, std::ios::binary);
                out << csv;
            }
            if (!gen_spectrum_out.empty()) {
                std::ofstream out(gen_spectrum_out, std::ios::binary);
                out << qfn::spectrum_to_json_text(sample.spectrum) << '\n';
            }
            return 0;
        }
        if (est->parsed()) {
            auto cfg = load_config(est_config_path, est_cfg, est);
            if (est->count("--seed")) cfg.seed = est_cfg.seed;
            const auto rec = qfn::run_trial(cfg, est_N, est_trial);
            std::cout << "{\"method\":\"" << rec.method << "\",\"regime\":\""
                      << rec.regime << "\",\"q\":" << rec.q << ",\"M\":" << rec.M
                      << ",\"N\":" << rec.N << ",\"trial\":" << rec.trial
                      << ",\"seed\":" << rec.seed << ",\"mspe\":" << rec.mspe
                      << ",\"err_a_sq\":" << rec.err_a_sq
                      << ",\"err_b_sq\":" << rec.err_b_sq
                      << ",\"particles_used\":" << rec.particles_used
                      << ",\"flags\":" << rec.flags << "}\n";
            return 0;
        }
        if (swp->parsed()) {
            auto cfg = load_config(swp_config_path, swp_cfg, swp);
            if (seed_opt->count() > 0) cfg.seed = swp_cfg.seed;
            else if (swp_config_path.empty() || cfg.seed == 0) {
                std::cerr << "sweep: --seed is required\n";
                return 2;
            }
            const auto records = swp_serial ? qfn::run_sweep_serial(cfg)
                                            : qfn::run_sweep(cfg);
            if (cfg.records_path.empty()) std::cout << qfn::records_to_csv(records);
            try {
                const auto fit = qfn::fit_scaling(records);
                std::cerr << "fit: exponent " << fit.exponent << " +/- "
                          << fit.std_error << '\n';
            } catch (const std::exception&) {
            }
            return 0;
        }
        if (bnd->parsed()) {
            std::cout << "q,M,N,delta_uub,delta_wbb,sql_lower,hl_lower,optimal_K,"
                         "max_np,c0,c1_floor,c2_floor\n";
            for (long long N : bnd_N) {
                const auto r = qfn::bound_report(bnd_q, bnd_M, N);
                std::cout << r.q << ',' << r.M << ',' << r.N << ',' << r.delta_uub
                          << ',' << r.delta_wbb << ',' << r.sql_lower << ','
                          << r.hl_lower << ',' << r.optimal_K << ',' << r.max_np
                          << ',' << r.c0 << ',' << r.c1_floor << ',' << r.c2_floor
                          << '\n';
            }
            if (!bnd_json.empty()) {
                std::ofstream out(bnd_json, std::ios::binary);
                out << qfn::bound_report_to_json_text(
                           qfn::bound_report(bnd_q, bnd_M, bnd_N.front()))
                    << '\n';
            }
            return 0;
        }
        if (ver->parsed()) return qfn::accept::run_all(std::cout) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
