#include "qfn/ps_estimator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfn {

EstimationRecord ps_estimate(const GridFunction& target, const ProbeBudget& budget,
                             const SmoothnessClass& cls, Regime regime,
                             const SmoothingKernel& kernel,
                             const KitaevConstants& constants, std::uint64_t seed) {
    if (budget.n1 < 1 || budget.n2 < 2 || budget.N != budget.n1 * budget.n2)
        throw std::invalid_argument("ps_estimate: budget must satisfy N = n1*n2, n2 >= 2");
    const double L = target.length;
    const int g = target.size();

    EstimationRecord rec;
    rec.method = "PS";
    rec.regime = regime_name(regime);
    rec.q = cls.q;
    rec.M = cls.M;
    rec.N = budget.N;
    rec.seed = seed;

    // Small-phase gate for the naive SQL estimator; the Kitaev path unwraps.
    if (regime == Regime::SQL) {
        double max_abs = 0.0;
        for (double v : target.values) max_abs = std::max(max_abs, std::abs(v));
        if (max_abs > std::numbers::pi / 3.0 + 1e-9) rec.flags |= kFlagAmplitude;
    }

    Rng trial_rng = make_rng({seed, 0x70735f747269616cULL});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double alpha = unit(trial_rng);

    // Exact site-phase values from the band-limited interpolant.
    const int band = std::min(g / 4, 1024);
    const FourierSpectrum spec = fourier_transform(target, band);

    int n0 = 0;
    if (regime == Regime::Heisenberg) {
        // Largest cascade depth whose exact particle count respects the
        // per-site share of the 2*c4*c5*c6*N budget.
        const long long cap = static_cast<long long>(
            2.0 * constants.c4 * constants.c5 * constants.c6 * budget.n2);
        n0 = kitaev_max_level(cap, constants, 1.0);
        if (n0 < 0) {
            rec.flags |= kFlagPrecondition;
            n0 = 0;
        }
    }

    std::vector<double> site_estimates(budget.n1);
    for (long long j = 0; j < budget.n1; ++j) {
        const double xj = (j + alpha) * L / budget.n1;
        const double phi_j = spec.eval(xj);
        Rng site_rng = make_rng({seed, 0x736974655f726e67ULL, static_cast<std::uint64_t>(j)});
        if (regime == Regime::SQL) {
            const PhaseEstimate e = ramsey_sql_estimate(phi_j, budget.n2, site_rng);
            site_estimates[j] = wrap_to_pi(e.value);
            rec.particles_used += e.particles_used;
        } else {
            const KitaevResult k =
                kitaev_multiscale_estimate(phi_j, n0, constants, 1.0, site_rng);
            site_estimates[j] = wrap_to_pi(k.estimate);
            rec.particles_used += k.particles_used;
            if (k.degraded) rec.flags |= kFlagDegraded;
        }
    }

    // The cascade returns phases mod 2pi; unwrap along the sites so that the
    // linear smoothing never averages across a 2pi seam.
    if (regime == Regime::Heisenberg) {
        for (long long j = 1; j < budget.n1; ++j)
            site_estimates[j] =
                site_estimates[j - 1] + wrap_to_pi(site_estimates[j] - site_estimates[j - 1]);
    }

    const GridFunction reconstructed =
        kernel_reconstruct(site_estimates, kernel, alpha, L, g);
    const GridFunction star = smoothed_target(target, kernel, budget.n1, alpha);

    rec.mspe = mspe(reconstructed, target);
    rec.err_a_sq = mspe(reconstructed, star);  // delta_stat^2
    rec.err_b_sq = mspe(star, target);         // delta_det^2
    return rec;
}

}  // namespace qfn
