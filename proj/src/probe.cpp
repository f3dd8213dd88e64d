#include "qfn/probe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfn/grid_function.hpp"

namespace qfn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

// Quadrature estimate of an effective phase from `copies` binary-outcome
// probes: half measure X (p = (1+cos)/2), half measure Y (p = (1+sin)/2).
double quadrature_phase(double eff_phi, long long copies, Rng& rng) {
    const long long nx = copies / 2;
    const long long ny = copies - nx;
    const double px = 0.5 * (1.0 + std::cos(eff_phi));
    const double py = 0.5 * (1.0 + std::sin(eff_phi));
    std::binomial_distribution<long long> bx(nx, px);
    std::binomial_distribution<long long> by(ny, py);
    const double cos_hat = 2.0 * static_cast<double>(bx(rng)) / nx - 1.0;
    const double sin_hat = 2.0 * static_cast<double>(by(rng)) / ny - 1.0;
    return wrap_2pi(std::atan2(sin_hat, cos_hat));
}

}  // namespace

double circular_median(const std::vector<double>& angles) {
    if (angles.empty()) throw std::invalid_argument("circular_median: empty");
    double best = angles[0];
    double best_cost = -1.0;
    for (double cand : angles) {
        double cost = 0.0;
        for (double a : angles) cost += periodic_modulus(a - cand);
        if (best_cost < 0.0 || cost < best_cost) {
            best_cost = cost;
            best = cand;
        }
    }
    return best;
}

PhaseEstimate noon_estimate(double phi, long long n_p, long long n_copies, Rng& rng) {
    if (n_copies < 2) throw std::invalid_argument("noon_estimate: n_copies >= 2 required");
    if (n_p < 1) throw std::invalid_argument("noon_estimate: n_p >= 1 required");
    const double theta = quadrature_phase(n_p * phi, n_copies, rng);
    PhaseEstimate e;
    e.modulo = kTwoPi / n_p;
    e.value = theta / n_p;
    e.particles_used = n_p * n_copies;
    return e;
}

PhaseEstimate noon_estimate(double phi, long long n_p, long long n_copies,
                            std::uint64_t seed) {
    Rng rng(seed);
    return noon_estimate(phi, n_p, n_copies, rng);
}

PhaseEstimate ramsey_sql_estimate(double phi, long long n2, Rng& rng) {
    if (n2 < 2) throw std::invalid_argument("ramsey_sql_estimate: n2 >= 2 required");
    return noon_estimate(phi, 1, n2, rng);
}

PhaseEstimate ramsey_sql_estimate(double phi, long long n2, std::uint64_t seed) {
    Rng rng(seed);
    return ramsey_sql_estimate(phi, n2, rng);
}

namespace {
long long copies_per_level(const KitaevConstants& c, double alpha) {
    return static_cast<long long>(std::ceil(c.c5 * c.c5 / alpha));
}
long long repeats_at(const KitaevConstants& c, int n0, int n) {
    return static_cast<long long>(std::ceil(c.c6 * (n0 + 1 - n)));
}
}  // namespace

long long kitaev_particle_budget(int n0, const KitaevConstants& c, double alpha) {
    const long long n_copy = copies_per_level(c, alpha);
    long long total = 0;
    for (int n = 0; n <= n0; ++n)
        total += (1LL << n) * n_copy * repeats_at(c, n0, n);
    return total;
}

int kitaev_max_level(long long cap, const KitaevConstants& c, double alpha) {
    int n0 = -1;
    while (n0 < 62 && kitaev_particle_budget(n0 + 1, c, alpha) <= cap) ++n0;
    return n0;
}

RefineResult kitaev_refine(const std::vector<double>& mu) {
    if (mu.empty()) throw std::invalid_argument("kitaev_refine: no levels");
    RefineResult res;
    double center = mu[0];
    double half = std::numbers::pi / 3.0;
    for (int n = 1; n < static_cast<int>(mu.size()); ++n) {
        const double scale = static_cast<double>(1LL << n);
        const double level_half = (std::numbers::pi / 3.0) / scale;
        // Candidate representative of mu_n/2^n closest to the current center.
        const double base = mu[n] / scale;
        const double spacing = kTwoPi / scale;
        const double j = std::round((center - base) / spacing);
        const double cand = base + j * spacing;
        const double lo = std::max(center - half, cand - level_half);
        const double hi = std::min(center + half, cand + level_half);
        if (lo >= hi) break;  // cascade dies at this level
        center = 0.5 * (lo + hi);
        half = 0.5 * (hi - lo);
        res.deepest_level = n;
    }
    const int n0 = static_cast<int>(mu.size()) - 1;
    res.degraded = (n0 > 0) && (res.deepest_level == 0);
    res.center = wrap_2pi(center);
    return res;
}

KitaevResult kitaev_multiscale_estimate(double phi_at_site, int n0,
                                        const KitaevConstants& c, double alpha,
                                        Rng& rng) {
    if (n0 < 0) throw std::invalid_argument("kitaev: n0 >= 0 required");
    const long long n_copy = copies_per_level(c, alpha);

    KitaevResult res;
    std::vector<double> mu(n0 + 1);
    for (int n = 0; n <= n0; ++n) {
        const long long reps = repeats_at(c, n0, n);
        std::vector<double> outcomes;
        outcomes.reserve(reps);
        for (long long r = 0; r < reps; ++r) {
            const PhaseEstimate e = noon_estimate(phi_at_site, 1LL << n, n_copy, rng);
            outcomes.push_back(wrap_2pi(e.value * (1LL << n)));  // estimate of 2^n*phi mod 2pi
            res.particles_used += e.particles_used;
        }
        mu[n] = circular_median(outcomes);
    }
    const RefineResult r = kitaev_refine(mu);
    res.estimate = r.center;
    res.deepest_level = r.deepest_level;
    res.degraded = r.degraded;
    return res;
}

KitaevResult kitaev_multiscale_estimate(double phi_at_site, int n0,
                                        const KitaevConstants& c, double alpha,
                                        std::uint64_t seed) {
    Rng rng(seed);
    return kitaev_multiscale_estimate(phi_at_site, n0, c, alpha, rng);
}

}  // namespace qfn
