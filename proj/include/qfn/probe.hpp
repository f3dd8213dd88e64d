#pragma once

#include <cstdint>
#include <vector>

#include "qfn/random.hpp"

namespace qfn {

struct PhaseEstimate {
    double value = 0.0;          // in [0, modulo)
    double modulo = 0.0;         // 2pi for SQL probes, 2pi/n_p for entangled ones
    long long particles_used = 0;
};

struct KitaevConstants {
    double c4 = 1.0;
    double c5 = 4.0;
    double c6 = 3.0;
};

struct KitaevResult {
    double estimate = 0.0;       // theta in [0, 2pi)
    long long particles_used = 0;
    int deepest_level = 0;
    bool degraded = false;       // the cascade died before the requested depth
};

/// Ramsey probe of a single phase with n2 separable particles, split evenly
/// between X and Y quadratures; variance O(1/n2).  Requires n2 >= 2.
PhaseEstimate ramsey_sql_estimate(double phi, long long n2, std::uint64_t seed);
PhaseEstimate ramsey_sql_estimate(double phi, long long n2, Rng& rng);

/// n_copies copies of an n_p-entangled probe; each copy interferes with
/// effective phase n_p*phi.  Estimates n_p*phi mod 2pi, reported with
/// modulo 2pi/n_p.  n_p = 1 reduces bit-exactly to ramsey_sql_estimate.
PhaseEstimate noon_estimate(double phi, long long n_p, long long n_copies,
                            std::uint64_t seed);
PhaseEstimate noon_estimate(double phi, long long n_p, long long n_copies, Rng& rng);

/// Multiscale unwrapping: levels n = 0..n0 use 2^n entanglement with
/// N_copy = ceil(c5^2/alpha) copies, repeated ceil(c6*(n0+1-n)) times and
/// combined by circular median; the surviving 2pi*2^{-n} interval is refined
/// level by level and its midpoint is returned.
KitaevResult kitaev_multiscale_estimate(double phi_at_site, int n0,
                                        const KitaevConstants& c, double alpha,
                                        std::uint64_t seed);
KitaevResult kitaev_multiscale_estimate(double phi_at_site, int n0,
                                        const KitaevConstants& c, double alpha,
                                        Rng& rng);

/// Exact particle count of the cascade: sum over levels of 2^n*N_copy*N_repeat.
long long kitaev_particle_budget(int n0, const KitaevConstants& c, double alpha);

/// Largest n0 >= 0 whose budget stays within `cap` particles (-1 if none).
int kitaev_max_level(long long cap, const KitaevConstants& c, double alpha);

/// Minimizer of summed periodic distance over the given angles.
double circular_median(const std::vector<double>& angles);

struct RefineResult {
    double center = 0.0;  // midpoint of the surviving interval, in [0, 2pi)
    int deepest_level = 0;
    bool degraded = false;
};

/// Interval refinement shared by the probe cascade and the WS level cascade:
/// mu[n] estimates 2^n * phi mod 2pi; each level keeps the candidate interval
/// satisfying [mu_n - 2^n theta]_{2pi} < pi/3 and intersects it with the
/// survivor.  Returns the midpoint at the deepest consistent level.
RefineResult kitaev_refine(const std::vector<double>& mu);

}  // namespace qfn
