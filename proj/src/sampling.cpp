#include "qfn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfn/random.hpp"

namespace qfn {

namespace {
int default_band(int grid_size, int k_gen) {
    if (k_gen > 0) {
        if (grid_size <= 4 * k_gen)
            throw std::invalid_argument("sample_target: G must exceed 4*k_gen");
        return k_gen;
    }
    return std::min(512, grid_size / 8);
}
}  // namespace

TargetSample sample_target(const SmoothnessClass& cls, int grid_size,
                           std::optional<double> amplitude_cap, std::uint64_t seed,
                           double constraint_fraction, int k_gen) {
    const int band = default_band(grid_size, k_gen);
    TargetSample out;
    out.spectrum = FourierSpectrum(band, cls.L);

    if (cls.M == 0.0) {
        out.f = inverse_fourier(out.spectrum, grid_size);
        return out;
    }

    Rng rng = make_rng({seed, 0x7a67657453616d70ULL});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 1; k <= band; ++k) {
        const double amp = std::pow(static_cast<double>(k), -(cls.q + 1.0)) *
                           (0.5 + unit(rng));
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        out.spectrum.at(k) = amp * cd(std::cos(phase), std::sin(phase));
        out.spectrum.at(-k) = std::conj(out.spectrum.at(k));
    }

    // Scale to the requested fraction of the Fourier budget.
    double value = 0.0;
    for (int k = 1; k <= band; ++k)
        value += std::pow(static_cast<double>(k), 2.0 * cls.q) * std::norm(out.spectrum.at(k));
    const double target_value = constraint_fraction * cls.fourier_budget();
    const double scale = std::sqrt(target_value / value);
    for (auto& c : out.spectrum.coeffs) c *= scale;

    out.f = inverse_fourier(out.spectrum, grid_size);

    if (amplitude_cap) {
        double max_abs = 0.0;
        for (double v : out.f.values) max_abs = std::max(max_abs, std::abs(v));
        if (max_abs > *amplitude_cap) {
            const double s = *amplitude_cap / max_abs * (1.0 - 1e-12);
            for (auto& c : out.spectrum.coeffs) c *= s;
            for (auto& v : out.f.values) v *= s;
            out.cap_limited = true;
        }
    }
    return out;
}

GridFunction sample_gaussian_process(double p, double flux_scale, int grid_size,
                                     std::uint64_t seed, double length, int k_gen) {
    if (p <= 1.0)
        throw std::invalid_argument("sample_gaussian_process: p must exceed 1");
    const int band = (k_gen > 0) ? k_gen : std::min(512, grid_size / 8);
    FourierSpectrum s(band, length);
    Rng rng = make_rng({seed, 0x67705f73616d706cULL});
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 1; k <= band; ++k) {
        const double sd = flux_scale * std::pow(static_cast<double>(k), -p / 2.0) /
                          std::sqrt(2.0);
        s.at(k) = cd(sd * gauss(rng), sd * gauss(rng));
        s.at(-k) = std::conj(s.at(k));
    }
    return inverse_fourier(s, grid_size);
}

}  // namespace qfn
