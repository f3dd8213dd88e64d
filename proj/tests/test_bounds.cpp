#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "qfn/bounds.hpp"
#include "qfn/harness.hpp"
#include "qfn/random.hpp"

using namespace qfn;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("qfi at u = 0 is 2I") {
    const SmoothnessClass cls(1.0, 1.0);
    const auto u0 = make_phase_vector(std::vector<double>(6, 0.0), cls);
    const auto J = qfi_matrix(u0, 64);
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k)
            CHECK(J[j][k] == doctest::Approx(j == k ? 2.0 : 0.0).epsilon(1e-9));
    CHECK_THROWS(qfi_matrix(u0, 40));  // G < 8K
}

TEST_CASE("qfi symmetry, PSD, and FD agreement") {
    const SmoothnessClass cls(1.0, 1.5);
    auto rng = make_rng({51});
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        std::vector<double> u(5);
        for (auto& v : u) v = 0.1 * gauss(rng);
        const auto p = make_phase_vector(u, cls);
        const auto J = qfi_matrix(p, 80);
        const auto Jfd = qfi_matrix_fd(p, 80);
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 5; ++k) {
                CHECK(J[j][k] == doctest::Approx(J[k][j]).epsilon(1e-12));
                CHECK(std::abs(J[j][k] - Jfd[j][k]) < 1e-5);
            }
        // x^T J x >= 0 on random directions
        for (int r = 0; r < 50; ++r) {
            std::vector<double> x(5);
            for (auto& v : x) v = gauss(rng);
            double quad = 0.0;
            for (int j = 0; j < 5; ++j)
                for (int k = 0; k < 5; ++k) quad += x[j] * J[j][k] * x[k];
            CHECK(quad >= -1e-9);
        }
        // diagonal never exceeds the single-particle cap
        for (int j = 0; j < 5; ++j) CHECK(J[j][j] <= 8.0 + 1e-12);
    }
}

TEST_CASE("uub") {
    CHECK(uub(8, 1000) == doctest::Approx(std::sqrt(8.0 / 8000.0)).epsilon(1e-12));
    // trace-form consistency: K (tr J)^{-1/2} = sqrt(K/2) >= sqrt(K/8)
    const SmoothnessClass cls(1.0, 1.0);
    const auto J = qfi_matrix(make_phase_vector(std::vector<double>(4, 0.0), cls), 64);
    double tr = 0.0;
    for (int j = 0; j < 4; ++j) tr += J[j][j];
    CHECK(4.0 / std::sqrt(tr) == doctest::Approx(std::sqrt(4.0 / 2.0)).epsilon(1e-9));
    CHECK(4.0 / std::sqrt(tr) >= uub(4, 1));
    CHECK_THROWS(uub(0, 10));
}

TEST_CASE("wbb") {
    CHECK(std::abs(wbb(1.0, 1.0) - 0.5) < 1e-12);
    CHECK(std::abs(wbb(0.05, 0.1) - 1.0 / 30.0) < 1e-12);
    // unbiased limit
    CHECK(wbb(0.3, 1e15) == doctest::Approx(0.3).epsilon(1e-9));
    // strictly below both arguments and increasing in each
    CHECK(wbb(0.2, 0.7) < 0.2);
    CHECK(wbb(0.2, 0.7) < 0.7);
    CHECK(wbb(0.25, 0.7) > wbb(0.2, 0.7));
    CHECK(wbb(0.2, 0.8) > wbb(0.2, 0.7));
    CHECK_THROWS(wbb(0.0, 1.0));
}

TEST_CASE("sql lower bound") {
    const auto a = sql_lower(1.0, 1.0, 1000);
    CHECK(a.bound > 0.0);
    CHECK(a.bound >= a.floor_value * 0.99);

    // closed-form exponent: q/(2q+1) = 1/3 at q = 1
    const auto b = sql_lower(1.0, 1.0, 8000);
    CHECK(a.floor_value / b.floor_value == doctest::Approx(2.0).epsilon(1e-12));

    // the scan dominates the fixed-K floor on random inputs
    auto rng = make_rng({52});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const double q = 0.3 + 2.7 * unit(rng);
        const double M = 0.1 + 10.0 * unit(rng);
        const long long N = 10 + static_cast<long long>(1e6 * unit(rng));
        const auto r = sql_lower(q, M, N);
        CHECK(r.bound >= r.floor_value * (1 - 1e-9));
        CHECK(r.k_star >= 1);
    }

    // q -> large: exponent approaches the parameter-estimation SQL 1/2
    const auto c1 = sql_lower(50.0, 1.0, 1000);
    const auto c2 = sql_lower(50.0, 1.0, 100000);
    const double exp_measured = std::log(c1.floor_value / c2.floor_value) / std::log(100.0);
    CHECK(exp_measured == doctest::Approx(50.0 / 101.0).epsilon(1e-9));
    CHECK(exp_measured > 0.45);
}

TEST_CASE("heisenberg lower bound") {
    // exponent q/(q+1) = 1/2 at q = 1
    const auto a = heisenberg_lower(1.0, 1.0, 10000);
    const auto b = heisenberg_lower(1.0, 1.0, 40000);
    CHECK_FALSE(a.fell_back_to_sql);
    CHECK(a.bound / b.bound == doctest::Approx(2.0).epsilon(1e-12));

    // hl <= sql whenever entanglement is usable
    auto rng = make_rng({53});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const double q = 0.4 + 1.6 * unit(rng);
        const double M = 0.2 + 2.0 * unit(rng);
        const long long N = 1000 + static_cast<long long>(1e6 * unit(rng));
        const auto hl = heisenberg_lower(q, M, N);
        const auto sql = sql_lower(q, M, N);
        if (!hl.fell_back_to_sql) CHECK(hl.bound <= sql.bound * (1 + 1e-9));
    }

    // tiny budget with a huge class: entanglement cannot help
    const auto fb = heisenberg_lower(1.0, 1e9, 2);
    CHECK(fb.fell_back_to_sql);
    CHECK(fb.bound == doctest::Approx(sql_lower(1.0, 1e9, 2).bound));
}

TEST_CASE("resource optima") {
    const auto sql = resource_optima(1.0, 1.0, 1000, Regime::SQL);
    CHECK(sql.n1 == 10);  // (M^2 N)^{1/3}
    CHECK(sql.n_p == 1);
    CHECK(sql.n1 * sql.n2 <= 1000);

    const auto deg = resource_optima(1.0, 1.0, 1, Regime::SQL);
    CHECK(deg.n1 == 1);
    CHECK(deg.n2 == 1);
    CHECK(deg.n_p == 1);

    const auto hl = resource_optima(1.0, 1.0, 100000, Regime::Heisenberg);
    CHECK(hl.n1 == std::llround(std::sqrt(100000.0)));
    CHECK(hl.n_p >= 1);
    CHECK(hl.n_p <= 100000);
    CHECK(hl.n_p * hl.n2 <= 100000);
}

TEST_CASE("bound report invariants and JSON") {
    const auto r = bound_report(1.0, 1.0, 5000);
    CHECK(r.delta_wbb < r.delta_uub);
    CHECK(r.sql_lower >= r.hl_lower);
    CHECK(r.c0 == doctest::Approx(2 * kPi).epsilon(1e-9));

    const auto j = nlohmann::json::parse(bound_report_to_json_text(r));
    CHECK(j["delta_uub"].get<double>() == r.delta_uub);
    CHECK(j["sql_lower"].get<double>() == r.sql_lower);
    CHECK(j["optimal_K"].get<long long>() == r.optimal_K);
    CHECK(j["max_np"].get<long long>() == r.max_np);
}
