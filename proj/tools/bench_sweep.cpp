// Compares the OpenMP sweep driver against the serial reference: wall time
// for each, plus a byte-identity check on the emitted CSV.

#include <chrono>
#include <iostream>

#include "qfn/harness.hpp"

int main(int argc, char** argv) {
    using clock = std::chrono::steady_clock;

    qfn::ExperimentConfig cfg;
    cfg.method = qfn::Method::PS;
    cfg.regime = qfn::Regime::SQL;
    cfg.q = 1.0;
    cfg.M = 1.0;
    cfg.G = 4096;
    cfg.N_list = {1 << 10, 1 << 12, 1 << 14, 1 << 16};
    cfg.trials = argc > 1 ? std::atoi(argv[1]) : 64;
    cfg.seed = 0xbe9c4;

    const auto t0 = clock::now();
    const auto par = qfn::run_sweep(cfg);
    const auto t1 = clock::now();
    const auto ser = qfn::run_sweep_serial(cfg);
    const auto t2 = clock::now();

    const double par_s = std::chrono::duration<double>(t1 - t0).count();
    const double ser_s = std::chrono::duration<double>(t2 - t1).count();
    const bool identical = qfn::records_to_csv(par) == qfn::records_to_csv(ser);

    std::cout << "records:  " << par.size() << " (" << cfg.trials << " trials/N)\n"
              << "parallel: " << par_s << " s\n"
              << "serial:   " << ser_s << " s\n"
              << "speedup:  " << ser_s / par_s << "x\n"
              << "identical output: " << (identical ? "yes" : "NO") << '\n';
    return identical ? 0 : 1;
}
