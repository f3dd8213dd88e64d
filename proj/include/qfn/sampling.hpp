#pragma once

#include <cstdint>
#include <optional>

#include "qfn/grid_function.hpp"
#include "qfn/smoothness.hpp"

namespace qfn {

struct TargetSample {
    GridFunction f;
    FourierSpectrum spectrum;
    bool cap_limited = false;  // amplitude cap forced a rescale below the
                               // requested constraint fraction
};

/// Random target in the Hölder class: coefficients |phi_k| ~ k^{-(q+1)} with
/// random phases, rescaled so the Fourier sufficient condition sits at
/// `constraint_fraction` of its budget (and, if set, max|phi| <= amplitude_cap).
TargetSample sample_target(const SmoothnessClass& cls, int grid_size,
                           std::optional<double> amplitude_cap, std::uint64_t seed,
                           double constraint_fraction = 0.9, int k_gen = 0);

/// Stationary Gaussian sample with spectral density ~ |k|^{-p} over the band;
/// the implied smoothness is q = (p-1)/2.  Requires p > 1.
GridFunction sample_gaussian_process(double p, double flux_scale, int grid_size,
                                     std::uint64_t seed, double length = 1.0,
                                     int k_gen = 0);

}  // namespace qfn
