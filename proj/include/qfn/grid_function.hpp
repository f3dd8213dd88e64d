#pragma once

#include <complex>
#include <vector>

namespace qfn {

using cd = std::complex<double>;

/// Real periodic function sampled on a uniform grid over [0, L).
/// Grid point j sits at x_j = j*L/G; no duplicated endpoint is stored.
struct GridFunction {
    std::vector<double> values;
    double length = 1.0;

    GridFunction() = default;
    GridFunction(std::vector<double> v, double L) : values(std::move(v)), length(L) {}

    int size() const { return static_cast<int>(values.size()); }
    double x(int j) const { return length * static_cast<double>(j) / size(); }
};

/// Complex Fourier amplitudes for integer wavenumbers |k| <= k_max.
/// Convention: phi_k = (1/G) sum_j exp(-2*pi*i*k*x_j/L) f(x_j).
struct FourierSpectrum {
    std::vector<cd> coeffs;  // index k + k_max, k = -k_max..k_max
    int k_max = 0;
    double length = 1.0;

    FourierSpectrum() = default;
    FourierSpectrum(int kmax, double L)
        : coeffs(2 * kmax + 1, cd{0.0, 0.0}), k_max(kmax), length(L) {}

    cd& at(int k) { return coeffs[k + k_max]; }
    const cd& at(int k) const { return coeffs[k + k_max]; }

    bool conjugate_symmetric(double tol = 1e-9) const;

    /// Evaluate the trigonometric polynomial at an arbitrary position.
    double eval(double x) const;
};

/// [theta]_{2pi}: minimal modulus regarding the 2pi periodicity; result in [0, pi].
double periodic_modulus(double theta);

/// Wrap an angle to the representative in (-pi, pi].
double wrap_to_pi(double theta);

/// One-trial mean-square periodic error between two functions on the same grid.
double mspe(const GridFunction& estimate, const GridFunction& target);

/// Discrete Fourier transform truncated to |k| <= k_max.  Requires k_max < G/2.
FourierSpectrum fourier_transform(const GridFunction& f, int k_max);

/// Inverse of fourier_transform on band-limited inputs.  Requires G > 2*k_max
/// and a conjugate-symmetric spectrum (the result must be real).
GridFunction inverse_fourier(const FourierSpectrum& s, int grid_size);

namespace detail {
// In-place radix-2 FFT (size must be a power of two); inverse applies 1/n.
void fft_pow2(std::vector<cd>& a, bool inverse);
bool is_pow2(int n);
// Full complex DFT of arbitrary size, convention X_k = sum_j x_j e^{-2pi i jk/n}.
std::vector<cd> dft(const std::vector<cd>& x, bool inverse);
}  // namespace detail

}  // namespace qfn
