#include "qfn/grid_function.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

namespace detail {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<cd>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = kTwoPi / len * (inverse ? 1.0 : -1.0);
        const cd wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                cd u = a[i + j];
                cd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& z : a) z /= static_cast<double>(n);
    }
}

std::vector<cd> dft(const std::vector<cd>& x, bool inverse) {
    if (is_pow2(static_cast<int>(x.size()))) {
        std::vector<cd> a = x;
        fft_pow2(a, inverse);
        return a;
    }
    const int n = static_cast<int>(x.size());
    std::vector<cd> out(n, cd{0.0, 0.0});
    const double sign = inverse ? 1.0 : -1.0;
    for (int k = 0; k < n; ++k) {
        cd acc{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            const double ang = sign * kTwoPi * static_cast<double>(j) * k / n;
            acc += x[j] * cd(std::cos(ang), std::sin(ang));
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

}  // namespace detail

bool FourierSpectrum::conjugate_symmetric(double tol) const {
    for (int k = 0; k <= k_max; ++k) {
        if (std::abs(at(-k) - std::conj(at(k))) > tol) return false;
    }
    return true;
}

double FourierSpectrum::eval(double x) const {
    // phi(x) = sum_k phi_k e^{2pi i k x / L}; real by conjugate symmetry.
    double acc = at(0).real();
    const double base = kTwoPi * x / length;
    for (int k = 1; k <= k_max; ++k) {
        const cd w(std::cos(base * k), std::sin(base * k));
        acc += 2.0 * (at(k) * w).real();
    }
    return acc;
}

double periodic_modulus(double theta) {
    double r = std::remainder(theta, kTwoPi);  // in [-pi, pi]
    return std::abs(r);
}

double wrap_to_pi(double theta) {
    double r = std::remainder(theta, kTwoPi);
    if (r <= -std::numbers::pi) r += kTwoPi;
    return r;
}

double mspe(const GridFunction& estimate, const GridFunction& target) {
    if (estimate.size() != target.size() || estimate.size() == 0)
        throw std::invalid_argument("mspe: grid mismatch");
    double acc = 0.0;
    for (int j = 0; j < estimate.size(); ++j) {
        const double d = periodic_modulus(estimate.values[j] - target.values[j]);
        acc += d * d;
    }
    return acc / estimate.size();
}

FourierSpectrum fourier_transform(const GridFunction& f, int k_max) {
    const int g = f.size();
    if (g == 0) throw std::invalid_argument("fourier_transform: empty grid");
    if (2 * k_max >= g)
        throw std::invalid_argument("fourier_transform: k_max >= G/2 would alias");
    std::vector<cd> a(f.values.begin(), f.values.end());
    const auto full = detail::dft(a, false);
    FourierSpectrum s(k_max, f.length);
    for (int k = -k_max; k <= k_max; ++k) {
        const int idx = (k % g + g) % g;
        s.at(k) = full[idx] / static_cast<double>(g);
    }
    return s;
}

GridFunction inverse_fourier(const FourierSpectrum& s, int grid_size) {
    if (grid_size <= 2 * s.k_max)
        throw std::invalid_argument("inverse_fourier: G must exceed 2*k_max");
    if (!s.conjugate_symmetric())
        throw std::invalid_argument("inverse_fourier: spectrum not conjugate-symmetric");
    std::vector<cd> full(grid_size, cd{0.0, 0.0});
    for (int k = -s.k_max; k <= s.k_max; ++k) {
        const int idx = (k % grid_size + grid_size) % grid_size;
        full[idx] = s.at(k);
    }
    const auto vals = detail::dft(full, true);
    GridFunction f;
    f.length = s.length;
    f.values.resize(grid_size);
    for (int j = 0; j < grid_size; ++j)
        f.values[j] = vals[j].real() * static_cast<double>(grid_size);
    return f;
}

}  // namespace qfn
