#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qfn/grid_function.hpp"
#include "qfn/random.hpp"

using namespace qfn;

namespace {
constexpr double kPi = std::numbers::pi;

GridFunction band_limited(int G, int k_hi, std::uint64_t seed) {
    auto rng = make_rng({seed});
    std::normal_distribution<double> gauss(0.0, 1.0);
    FourierSpectrum s(k_hi, 1.0);
    for (int k = 1; k <= k_hi; ++k) {
        const cd c{gauss(rng), gauss(rng)};
        s.at(k) = c;
        s.at(-k) = std::conj(c);
    }
    s.at(0) = gauss(rng);
    return inverse_fourier(s, G);
}
}  // namespace

TEST_CASE("periodic modulus") {
    CHECK(periodic_modulus(0.0) == doctest::Approx(0.0));
    CHECK(periodic_modulus(3 * kPi) == doctest::Approx(kPi));
    CHECK(periodic_modulus(-kPi / 2) == doctest::Approx(kPi / 2));
    // invariance under 2pi shifts and range [0, pi]
    auto rng = make_rng({11});
    std::uniform_real_distribution<double> unit(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double t = unit(rng);
        const int n = static_cast<int>(unit(rng));
        CHECK(periodic_modulus(t) ==
              doctest::Approx(periodic_modulus(t + 2 * kPi * n)).epsilon(1e-12));
        CHECK(periodic_modulus(t) >= 0.0);
        CHECK(periodic_modulus(t) <= kPi + 1e-15);
    }
}

TEST_CASE("wrap to pi") {
    CHECK(wrap_to_pi(kPi) == doctest::Approx(kPi));
    CHECK(wrap_to_pi(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(wrap_to_pi(-0.25) == doctest::Approx(-0.25));
}

TEST_CASE("mspe") {
    const auto f = band_limited(256, 8, 1);
    CHECK(mspe(f, f) == doctest::Approx(0.0));

    GridFunction shifted = f;
    for (auto& v : shifted.values) v += 2 * kPi;
    CHECK(mspe(shifted, f) == doctest::Approx(0.0).epsilon(1e-12));

    GridFunction off = f;
    for (auto& v : off.values) v += kPi;
    CHECK(mspe(off, f) == doctest::Approx(kPi * kPi));

    // symmetric and nonnegative
    const auto g = band_limited(256, 8, 2);
    CHECK(mspe(f, g) == doctest::Approx(mspe(g, f)));
    CHECK(mspe(f, g) >= 0.0);

    GridFunction wrong{std::vector<double>(128, 0.0), 1.0};
    CHECK_THROWS(mspe(f, wrong));
}

TEST_CASE("fourier transform examples") {
    const int G = 256;
    GridFunction c{std::vector<double>(G, 3.5), 1.0};
    auto sc = fourier_transform(c, 10);
    CHECK(sc.at(0).real() == doctest::Approx(3.5).epsilon(1e-12));
    for (int k = 1; k <= 10; ++k) {
        CHECK(std::abs(sc.at(k)) < 1e-12);
        CHECK(std::abs(sc.at(-k)) < 1e-12);
    }

    GridFunction sine{std::vector<double>(G), 1.0};
    for (int j = 0; j < G; ++j)
        sine.values[j] = std::numbers::sqrt2 * std::sin(2 * kPi * sine.x(j));
    auto ss = fourier_transform(sine, 4);
    CHECK(std::abs(ss.at(1) - cd{0.0, -1.0 / std::numbers::sqrt2}) < 1e-12);
    CHECK(std::abs(ss.at(-1) - cd{0.0, 1.0 / std::numbers::sqrt2}) < 1e-12);
    CHECK(std::abs(ss.at(0)) < 1e-12);
    CHECK(std::abs(ss.at(2)) < 1e-12);

    CHECK_THROWS(fourier_transform(c, G / 2));
}

TEST_CASE("inverse fourier") {
    FourierSpectrum one(4, 1.0);
    one.at(0) = 1.0;
    const auto g = inverse_fourier(one, 64);
    for (double v : g.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    // round trip on band-limited functions
    const auto f = band_limited(512, 20, 3);
    const auto back = inverse_fourier(fourier_transform(f, 40), 512);
    for (int j = 0; j < 512; ++j)
        CHECK(back.values[j] == doctest::Approx(f.values[j]).epsilon(1e-10));

    FourierSpectrum zero(4, 1.0);
    for (double v : inverse_fourier(zero, 32).values) CHECK(v == 0.0);

    FourierSpectrum bad(2, 1.0);
    bad.at(1) = cd{1.0, 0.0};  // missing conjugate partner
    CHECK_THROWS(inverse_fourier(bad, 32));
    CHECK_THROWS(inverse_fourier(one, 8));  // G <= 2 k_max
}

TEST_CASE("Parseval") {
    const int G = 512;
    const auto f = band_limited(G, 30, 4);
    const auto s = fourier_transform(f, 60);
    double space = 0.0;
    for (double v : f.values) space += v * v;
    space /= G;
    double freq = 0.0;
    for (const auto& c : s.coeffs) freq += std::norm(c);
    CHECK(space == doctest::Approx(freq).epsilon(1e-10));
}

TEST_CASE("spectrum eval matches grid") {
    const auto f = band_limited(256, 12, 5);
    const auto s = fourier_transform(f, 24);
    for (int j = 0; j < 256; j += 7)
        CHECK(s.eval(f.x(j)) == doctest::Approx(f.values[j]).epsilon(1e-9));
    CHECK(s.conjugate_symmetric());
}

TEST_CASE("fft agrees with the plain dft") {
    auto rng = make_rng({6});
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cd> x(64);
    for (auto& v : x) v = cd{gauss(rng), gauss(rng)};
    auto a = x;
    detail::fft_pow2(a, false);
    const auto b = detail::dft(x, false);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
}
