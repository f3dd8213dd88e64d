#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qfn/sampling.hpp"
#include "qfn/smoothness.hpp"

using namespace qfn;

TEST_CASE("zero budget gives the zero function") {
    const SmoothnessClass cls(1.0, 0.0);
    const auto s = sample_target(cls, 256, std::nullopt, 1);
    for (double v : s.f.values) CHECK(v == 0.0);
}

TEST_CASE("samples are admissible") {
    const double qs[] = {0.5, 1.0, 1.5, 2.0};
    for (int t = 0; t < 16; ++t) {
        const SmoothnessClass cls(qs[t % 4], 0.3 + 0.5 * (t % 5));
        const auto s = sample_target(cls, 1024, std::nullopt, 100 + t);
        CHECK(fourier_constraint(s.spectrum, cls).satisfied);
        CHECK_FALSE(s.cap_limited);
    }
}

TEST_CASE("constraint fraction is hit") {
    const SmoothnessClass cls(1.0, 1.0);
    const auto s = sample_target(cls, 1024, std::nullopt, 7, 0.9);
    const auto check = fourier_constraint(s.spectrum, cls);
    CHECK(check.value == doctest::Approx(0.9 * cls.fourier_budget()).epsilon(1e-9));
}

TEST_CASE("amplitude cap") {
    const SmoothnessClass cls(1.0, 4.0);
    const double cap = 0.05;
    const auto s = sample_target(cls, 1024, cap, 3);
    double amp = 0.0;
    for (double v : s.f.values) amp = std::max(amp, std::abs(v));
    CHECK(amp <= cap * (1 + 1e-12));
    CHECK(s.cap_limited);  // cap far below the class-typical amplitude
    CHECK(fourier_constraint(s.spectrum, cls).satisfied);
}

TEST_CASE("determinism and seed sensitivity") {
    const SmoothnessClass cls(1.0, 1.0);
    const auto a = sample_target(cls, 512, std::nullopt, 42);
    const auto b = sample_target(cls, 512, std::nullopt, 42);
    const auto c = sample_target(cls, 512, std::nullopt, 43);
    CHECK(a.f.values == b.f.values);
    CHECK(a.f.values != c.f.values);
}

TEST_CASE("gaussian process basics") {
    CHECK_THROWS(sample_gaussian_process(1.0, 1.0, 256, 1));
    CHECK_THROWS(sample_gaussian_process(0.5, 1.0, 256, 1));
    for (double v : sample_gaussian_process(3.0, 0.0, 256, 1).values) CHECK(v == 0.0);
}

TEST_CASE("gaussian process periodogram slope") {
    // average |phi_k|^2 over many samples should fall off as k^{-p}
    const double p = 3.0;
    const int G = 512, reps = 400, k_hi = 40;
    std::vector<double> power(k_hi + 1, 0.0);
    for (int r = 0; r < reps; ++r) {
        const auto f = sample_gaussian_process(p, 1.0, G, 5000 + r);
        const auto s = fourier_transform(f, k_hi);
        for (int k = 2; k <= k_hi; ++k) power[k] += std::norm(s.at(k));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = 2; k <= k_hi; ++k) {
        const double lx = std::log(double(k)), ly = std::log(power[k] / reps);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-p).epsilon(0.07));
}

TEST_CASE("gaussian sample has finite seminorm below the implied q") {
    // p = 3 maps to q = 1; check the q = 0.9 seminorm is finite and modest
    const SmoothnessClass cls(0.9, 1.0);
    for (int r = 0; r < 5; ++r) {
        const auto f = sample_gaussian_process(3.0, 0.05, 1024, 600 + r);
        const double sem = holder_seminorm(f, cls);
        CHECK(std::isfinite(sem));
        CHECK(sem < 1e3);
    }
}
