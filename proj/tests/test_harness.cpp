#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "qfn/harness.hpp"
#include "qfn/random.hpp"

using namespace qfn;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.method = Method::PS;
    c.regime = Regime::SQL;
    c.q = 1.0;
    c.M = 1.0;
    c.G = 1024;
    c.N_list = {256, 512, 1024};
    c.trials = 5;
    c.seed = 1234;
    return c;
}

std::vector<EstimationRecord> synthetic(const std::vector<long long>& Ns, int trials,
                                        double (*delta)(long long)) {
    std::vector<EstimationRecord> records;
    for (long long N : Ns)
        for (int t = 0; t < trials; ++t) {
            EstimationRecord r;
            r.method = "PS";
            r.regime = "SQL";
            r.N = N;
            r.trial = t;
            const double d = delta(N);
            r.mspe = d * d;
            records.push_back(r);
        }
    return records;
}

}  // namespace

TEST_CASE("config validation") {
    auto c = small_config();
    validate_config(c);

    auto bad = c;
    bad.N_list = {512, 256};
    CHECK_THROWS(validate_config(bad));

    bad = c;
    bad.N_list = {64, 128, 256, 512};
    bad.trials = 10;  // fits need >= 30
    CHECK_THROWS(validate_config(bad));

    bad = c;
    bad.method = Method::WS;
    bad.q = 2.0;
    CHECK_THROWS(validate_config(bad));

    bad = c;
    bad.N_list.clear();
    CHECK_THROWS(validate_config(bad));
}

TEST_CASE("config JSON round trip") {
    auto c = small_config();
    c.method = Method::WS;
    c.regime = Regime::Heisenberg;
    c.amplitude_cap = 0.5;
    c.kernel_m = 2;
    c.records_path = "/tmp/r.csv";
    const auto back = config_from_json_text(config_to_json_text(c));
    CHECK(back.method == Method::WS);
    CHECK(back.regime == Regime::Heisenberg);
    CHECK(back.q == c.q);
    CHECK(back.N_list == c.N_list);
    CHECK(back.trials == c.trials);
    CHECK(back.seed == c.seed);
    CHECK(back.amplitude_cap.has_value());
    CHECK(*back.amplitude_cap == 0.5);
    CHECK(back.kernel_m == 2);
    CHECK(back.records_path == c.records_path);
}

TEST_CASE("sweep record counts and determinism") {
    const auto cfg = small_config();
    const auto par = run_sweep(cfg);
    const auto ser = run_sweep_serial(cfg);
    CHECK(par.size() == cfg.N_list.size() * cfg.trials);
    CHECK(records_to_csv(par) == records_to_csv(ser));  // byte-identical

    // rerun reproduces exactly
    CHECK(records_to_csv(run_sweep(cfg)) == records_to_csv(par));
}

TEST_CASE("zero-budget class yields zero deterministic error") {
    auto cfg = small_config();
    cfg.M = 0.0;
    cfg.N_list = {64};
    cfg.trials = 1;
    const auto records = run_sweep(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].err_b_sq == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("CSV round trip is exact") {
    const auto records = run_sweep(small_config());
    const auto back = records_from_csv(records_to_csv(records));
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].method == records[i].method);
        CHECK(back[i].regime == records[i].regime);
        CHECK(back[i].q == records[i].q);
        CHECK(back[i].M == records[i].M);
        CHECK(back[i].N == records[i].N);
        CHECK(back[i].trial == records[i].trial);
        CHECK(back[i].seed == records[i].seed);
        CHECK(back[i].mspe == records[i].mspe);  // bitwise via %.17g
        CHECK(back[i].err_a_sq == records[i].err_a_sq);
        CHECK(back[i].err_b_sq == records[i].err_b_sq);
        CHECK(back[i].particles_used == records[i].particles_used);
        CHECK(back[i].flags == records[i].flags);
    }
    const auto header = records_to_csv({});
    CHECK(header ==
          "method,regime,q,M,N,trial,seed,mspe,err_a_sq,err_b_sq,particles_used,flags\n");
}

TEST_CASE("fit on exact power laws") {
    const std::vector<long long> Ns = {10, 100, 1000, 10000, 100000};
    const auto a = fit_scaling(
        synthetic(Ns, 3, [](long long N) { return std::pow(double(N), -1.0 / 3.0); }));
    CHECK(a.exponent == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(a.exponent_sq == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
    CHECK(a.std_error == doctest::Approx(0.0).epsilon(1e-12));

    const auto b = fit_scaling(
        synthetic(Ns, 3, [](long long N) { return 2.0 * std::pow(double(N), -0.5); }));
    CHECK(b.exponent == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(b.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // too few N values
    CHECK_THROWS(fit_scaling(
        synthetic({10, 100, 1000}, 3, [](long long N) { return 1.0 / N; })));
}

TEST_CASE("bootstrap SE shrinks with trials") {
    auto noisy = [](const std::vector<long long>& Ns, int trials) {
        auto records = synthetic(Ns, trials,
                                 [](long long N) { return std::pow(double(N), -0.5); });
        auto rng = make_rng({61});
        std::normal_distribution<double> gauss(0.0, 0.4);
        for (auto& r : records) r.mspe *= std::exp(gauss(rng));
        return records;
    };
    const std::vector<long long> Ns = {16, 64, 256, 1024, 4096};
    const auto f1 = fit_scaling(noisy(Ns, 50));
    const auto f2 = fit_scaling(noisy(Ns, 200));
    CHECK(f2.std_error < f1.std_error * 0.75);
    CHECK(f2.std_error > f1.std_error * 0.25);
}

TEST_CASE("flagged records are excluded from fits") {
    const std::vector<long long> Ns = {10, 100, 1000, 10000, 100000};
    auto records = synthetic(Ns, 100,
                             [](long long N) { return std::pow(double(N), -0.25); });
    auto spiked = records;
    for (int i = 0; i < 4; ++i) {  // 1% of one N's trials, flagged garbage
        EstimationRecord r = records[i];
        r.mspe = 1e6;
        r.flags = kFlagPrecondition;
        spiked.push_back(r);
    }
    const auto clean = fit_scaling(records);
    const auto with_flags = fit_scaling(spiked);
    CHECK(with_flags.exponent == doctest::Approx(clean.exponent).epsilon(1e-12));
    CHECK(with_flags.excluded_records == 4);

    // an N with > 5% flagged trials is dropped from the window
    auto heavy = records;
    for (int i = 0; i < 7; ++i) {
        EstimationRecord r;
        r.N = 10;
        r.mspe = 1.0;
        r.flags = kFlagDegraded;
        heavy.push_back(r);
    }
    const auto dropped = fit_scaling(heavy);
    REQUIRE(dropped.dropped_n.size() == 1);
    CHECK(dropped.dropped_n[0] == 10);
    CHECK(dropped.window.size() == 4);
}

TEST_CASE("bound check passes on real sweeps and catches cheats") {
    auto cfg = small_config();
    cfg.N_list = {256, 1024, 4096};
    cfg.trials = 20;
    const auto records = run_sweep(cfg);
    const auto ok = check_bounds(records, cfg.q, cfg.M, cfg.regime);
    CHECK(ok.pass);
    REQUIRE(ok.rows.size() == 3);
    for (const auto& row : ok.rows) CHECK(row.mean_delta >= row.floor - 3 * row.sigma_mean);

    auto cheat = records;
    for (auto& r : cheat) r.mspe /= 1e6;
    CHECK_FALSE(check_bounds(cheat, cfg.q, cfg.M, cfg.regime).pass);

    // floors decrease from SQL to Heisenberg at fixed N
    const auto hl = check_bounds(records, cfg.q, cfg.M, Regime::Heisenberg);
    for (std::size_t i = 0; i < hl.rows.size(); ++i)
        CHECK(hl.rows[i].floor <= ok.rows[i].floor);
}

TEST_CASE("estimator failures become flagged records") {
    auto cfg = small_config();
    cfg.method = Method::WS;
    cfg.N_list = {8};  // tomography needs n_c >= 8(2K+1); N = 8 cannot satisfy it
    cfg.trials = 2;
    const auto records = run_sweep(cfg);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) CHECK((r.flags & kFlagPrecondition) != 0);
}

TEST_CASE("artifact emission") {
    auto cfg = small_config();
    cfg.records_path = "/tmp/qfn_test_records.csv";
    cfg.svg_path = "/tmp/qfn_test_scatter.svg";
    const auto records = run_sweep(cfg);
    const auto read_back = read_records_csv(cfg.records_path);
    CHECK(records_to_csv(read_back) == records_to_csv(records));

    const auto svg = scatter_svg(records);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("circle") != std::string::npos);
    std::remove(cfg.records_path.c_str());
    std::remove(cfg.svg_path.c_str());
}

TEST_CASE("grid and spectrum serialization") {
    GridFunction f{{0.5, -0.25}, 1.0};
    CHECK(grid_to_csv(f) == "x,value\n0,0.5\n0.5,-0.25\n");
    FourierSpectrum s(1, 1.0);
    s.at(1) = cd{0.25, -0.5};
    s.at(-1) = cd{0.25, 0.5};
    const auto json = spectrum_to_json_text(s);
    CHECK(json.find("\"k_max\": 1") != std::string::npos);
    CHECK(json.find("\"re\": 0.25") != std::string::npos);
}
