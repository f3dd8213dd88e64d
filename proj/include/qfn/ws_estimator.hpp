#pragma once

#include <cstdint>

#include "qfn/grid_function.hpp"
#include "qfn/probe.hpp"
#include "qfn/record.hpp"
#include "qfn/smoothness.hpp"

namespace qfn {

/// Two-branch probe state on the wavenumber basis: amp_vacuum holds the
/// |-... -> branch (concentrated at k = 0 for states built by output_state),
/// amp_excited the phase-encoding branch.  Total norm 1.
struct WavefunctionState {
    std::vector<cd> amp_vacuum;   // index k + k_max
    std::vector<cd> amp_excited;  // index k + k_max
    int k_max = 0;
    long long n_p = 1;
    double length = 1.0;

    WavefunctionState() = default;
    WavefunctionState(int kmax, long long np, double L)
        : amp_vacuum(2 * kmax + 1, cd{0, 0}),
          amp_excited(2 * kmax + 1, cd{0, 0}),
          k_max(kmax), n_p(np), length(L) {}

    cd& vac(int k) { return amp_vacuum[k + k_max]; }
    const cd& vac(int k) const { return amp_vacuum[k + k_max]; }
    cd& exc(int k) { return amp_excited[k + k_max]; }
    const cd& exc(int k) const { return amp_excited[k + k_max]; }

    double norm_sq() const;
};

/// Overlap <a|b> over the common wavenumber band.
cd state_overlap(const WavefunctionState& a, const WavefunctionState& b);

/// Output probe state: amp_vacuum = delta_{k,0}/sqrt(2);
/// amp_excited = Fourier coefficients of e^{i n_p phi(x)} / sqrt(2).
WavefunctionState output_state(const GridFunction& target, long long n_p, int k_max);

struct Postselection {
    WavefunctionState state;
    double delta_ps_sq = 0.0;
    double kept_weight = 0.0;
};

/// Project onto |k| <= K and renormalize.
/// delta_ps_sq = (pi^2/n_p^2) (1 - |<S|S*>|^2).
Postselection project_low_wavenumber(const WavefunctionState& state, int K);

/// Finite-copy interferometric tomography against the vacuum-branch
/// reference: n_c/2 copies per interference basis, multinomial outcomes over
/// the 2K+1 band-limited positions.  Reconstruction infidelity ~ K/n_c.
/// Requires n_c >= 8(2K+1).
WavefunctionState simulate_tomography(const WavefunctionState& postselected, int K,
                                      long long n_c, std::uint64_t seed);
WavefunctionState simulate_tomography(const WavefunctionState& postselected, int K,
                                      long long n_c, Rng& rng);

/// Wavenumber-state estimation.  err_a_sq = delta_PS^2, err_b_sq = delta_QT^2.
/// Refuses q > 1.
EstimationRecord ws_estimate(const GridFunction& target, const ProbeBudget& budget,
                             const SmoothnessClass& cls,
                             const KitaevConstants& constants, std::uint64_t seed);

}  // namespace qfn
