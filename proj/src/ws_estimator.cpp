#include "qfn/ws_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double WavefunctionState::norm_sq() const {
    double acc = 0.0;
    for (const auto& c : amp_vacuum) acc += std::norm(c);
    for (const auto& c : amp_excited) acc += std::norm(c);
    return acc;
}

cd state_overlap(const WavefunctionState& a, const WavefunctionState& b) {
    const int kb = std::min(a.k_max, b.k_max);
    cd acc{0.0, 0.0};
    for (int k = -kb; k <= kb; ++k) {
        acc += std::conj(a.vac(k)) * b.vac(k);
        acc += std::conj(a.exc(k)) * b.exc(k);
    }
    return acc;
}

WavefunctionState output_state(const GridFunction& target, long long n_p, int k_max) {
    const int g = target.size();
    if (2 * k_max >= g) throw std::invalid_argument("output_state: k_max >= G/2");
    WavefunctionState s(k_max, n_p, target.length);
    s.vac(0) = cd{1.0 / std::sqrt(2.0), 0.0};

    std::vector<cd> vals(g);
    for (int j = 0; j < g; ++j) {
        const double ph = n_p * target.values[j];
        vals[j] = cd(std::cos(ph), std::sin(ph)) / std::sqrt(2.0);
    }
    const auto full = detail::dft(vals, false);
    for (int k = -k_max; k <= k_max; ++k) {
        const int idx = (k % g + g) % g;
        s.exc(k) = full[idx] / static_cast<double>(g);
    }
    return s;
}

Postselection project_low_wavenumber(const WavefunctionState& state, int K) {
    if (K > state.k_max) throw std::invalid_argument("project_low_wavenumber: K > k_max");
    double kept = 0.0;
    for (int k = -K; k <= K; ++k) kept += std::norm(state.vac(k)) + std::norm(state.exc(k));
    const double total = state.norm_sq();
    const double w = kept / total;
    if (w < 1e-6)
        throw std::runtime_error("project_low_wavenumber: postselection probability vanishes");

    Postselection out;
    out.kept_weight = w;
    out.state = WavefunctionState(K, state.n_p, state.length);
    const double inv = 1.0 / std::sqrt(kept);
    for (int k = -K; k <= K; ++k) {
        out.state.vac(k) = state.vac(k) * inv;
        out.state.exc(k) = state.exc(k) * inv;
    }
    // |<S|S*>|^2 = <S|P_K|S> = w for S* propto P_K S, so the two supplement
    // bounds coincide here.
    const double np2 = static_cast<double>(state.n_p) * state.n_p;
    out.delta_ps_sq = (std::numbers::pi * std::numbers::pi / np2) * (1.0 - w);
    return out;
}

namespace {

// Multinomial counts by conditional binomials.
std::vector<long long> multinomial(long long n, const std::vector<double>& p, Rng& rng) {
    std::vector<long long> counts(p.size(), 0);
    double p_rem = 0.0;
    for (double v : p) p_rem += v;
    long long n_rem = n;
    for (std::size_t i = 0; i + 1 < p.size() && n_rem > 0; ++i) {
        double pi = (p_rem > 0.0) ? std::clamp(p[i] / p_rem, 0.0, 1.0) : 0.0;
        std::binomial_distribution<long long> bin(n_rem, pi);
        counts[i] = bin(rng);
        n_rem -= counts[i];
        p_rem -= p[i];
    }
    counts.back() += n_rem;
    return counts;
}

}  // namespace

WavefunctionState simulate_tomography(const WavefunctionState& postselected, int K,
                                      long long n_c, Rng& rng) {
    if (K > postselected.k_max)
        throw std::invalid_argument("simulate_tomography: K > k_max of input state");
    const long long t_dim = 2LL * K + 1;
    if (n_c < 8 * (2 * K + 1))
        throw std::invalid_argument("simulate_tomography: n_c >= 8(2K+1) required");

    // Band-limited position amplitudes over T = 2K+1 points (unitary DFT).
    const int T = static_cast<int>(t_dim);
    const double v = std::abs(postselected.vac(0));
    const double u = v / std::sqrt(static_cast<double>(T));
    std::vector<cd> psi(T, cd{0, 0});
    for (int t = 0; t < T; ++t) {
        cd acc{0, 0};
        for (int k = -K; k <= K; ++k) {
            const double ang = kTwoPi * k * t / T;
            acc += postselected.exc(k) * cd(std::cos(ang), std::sin(ang));
        }
        psi[t] = acc / std::sqrt(static_cast<double>(T));
    }

    // Basis X interferes the branches directly, basis Y with a pi/2 phase.
    std::vector<double> px(2 * T), py(2 * T);
    for (int t = 0; t < T; ++t) {
        px[2 * t] = 0.5 * std::norm(u + psi[t]);
        px[2 * t + 1] = 0.5 * std::norm(u - psi[t]);
        py[2 * t] = 0.5 * std::norm(u + cd(0, 1) * psi[t]);
        py[2 * t + 1] = 0.5 * std::norm(u - cd(0, 1) * psi[t]);
    }
    const long long nx = n_c / 2;
    const long long ny = n_c - nx;
    const auto cx = multinomial(nx, px, rng);
    const auto cy = multinomial(ny, py, rng);

    // p(t,+) - p(t,-) = 2 Re(u* psi_t) in X, -2 u Im(psi_t) in Y (u real).
    std::vector<cd> psi_hat(T);
    for (int t = 0; t < T; ++t) {
        const double re = (static_cast<double>(cx[2 * t]) - cx[2 * t + 1]) / (2.0 * nx * u);
        const double im = (static_cast<double>(cy[2 * t + 1]) - cy[2 * t]) / (2.0 * ny * u);
        psi_hat[t] = cd(re, im);
    }

    WavefunctionState rec(K, postselected.n_p, postselected.length);
    rec.vac(0) = cd{v, 0.0};
    for (int k = -K; k <= K; ++k) {
        cd acc{0, 0};
        for (int t = 0; t < T; ++t) {
            const double ang = -kTwoPi * k * t / T;
            acc += psi_hat[t] * cd(std::cos(ang), std::sin(ang));
        }
        rec.exc(k) = acc / std::sqrt(static_cast<double>(T));
    }
    const double inv = 1.0 / std::sqrt(rec.norm_sq());
    for (auto& c : rec.amp_vacuum) c *= inv;
    for (auto& c : rec.amp_excited) c *= inv;
    return rec;
}

WavefunctionState simulate_tomography(const WavefunctionState& postselected, int K,
                                      long long n_c, std::uint64_t seed) {
    Rng rng(seed);
    return simulate_tomography(postselected, K, n_c, rng);
}

namespace {

// Position-space phase readout of the reconstructed excited branch on the
// full grid; points with amplitude below 10% of the mean magnitude inherit
// the nearest valid phase.
std::vector<double> phase_readout(const WavefunctionState& state, int grid_size) {
    const int g = grid_size;
    std::vector<cd> full(g, cd{0, 0});
    for (int k = -state.k_max; k <= state.k_max; ++k) {
        const int idx = (k % g + g) % g;
        full[idx] = state.exc(k);
    }
    auto vals = detail::dft(full, true);
    for (auto& z : vals) z *= static_cast<double>(g);

    double mean_mag = 0.0;
    for (const auto& z : vals) mean_mag += std::abs(z);
    mean_mag /= g;
    const double floor_mag = 0.1 * mean_mag;

    std::vector<double> phase(g);
    std::vector<bool> valid(g);
    for (int j = 0; j < g; ++j) {
        valid[j] = std::abs(vals[j]) >= floor_mag;
        phase[j] = std::arg(vals[j]);
    }
    for (int j = 0; j < g; ++j) {
        if (valid[j]) continue;
        for (int d = 1; d < g; ++d) {
            const int lo = (j - d + g) % g, hi = (j + d) % g;
            if (valid[lo]) { phase[j] = phase[lo]; break; }
            if (valid[hi]) { phase[j] = phase[hi]; break; }
        }
    }
    return phase;
}

int default_ws_cutoff(const SmoothnessClass& cls, const ProbeBudget& b) {
    double k_analytic;
    if (b.n_p <= 1) {
        k_analytic = std::pow(cls.M * cls.M * static_cast<double>(b.N),
                              1.0 / (2.0 * cls.q + 1.0));
    } else {
        // Entangled regime: balance K^{-q} M against 1/n_p, capped at n_c.
        k_analytic = std::pow(cls.M * static_cast<double>(b.n_p), 1.0 / cls.q);
        k_analytic = std::min(k_analytic, static_cast<double>(b.n_c));
    }
    long long k = std::llround(k_analytic);
    // Tomography solvability: n_c >= 8(2K+1).
    const long long k_cap = (b.n_c / 8 - 1) / 2;
    k = std::clamp(k, 1LL, std::max(1LL, k_cap));
    return static_cast<int>(k);
}

}  // namespace

EstimationRecord ws_estimate(const GridFunction& target, const ProbeBudget& budget,
                             const SmoothnessClass& cls,
                             const KitaevConstants& constants, std::uint64_t seed) {
    if (cls.q > 1.0)
        throw std::invalid_argument(
            "ws_estimate: the wavenumber-state method is restricted to q <= 1");
    if (budget.n_p < 1 || budget.n_c < 1 || budget.N != budget.n_p * budget.n_c)
        throw std::invalid_argument("ws_estimate: budget must satisfy N = n_p*n_c");

    const int g = target.size();
    const double L = target.length;
    const int K = (budget.K > 0) ? static_cast<int>(budget.K) : default_ws_cutoff(cls, budget);
    const int k_full = g / 2 - 1;

    EstimationRecord rec;
    rec.method = "WS";
    rec.regime = regime_name(budget.n_p > 1 ? Regime::Heisenberg : Regime::SQL);
    rec.q = cls.q;
    rec.M = cls.M;
    rec.N = budget.N;
    rec.seed = seed;

    Rng rng = make_rng({seed, 0x77735f747269616cULL});

    if (budget.n_p == 1) {
        const WavefunctionState s = output_state(target, 1, k_full);
        Postselection post = project_low_wavenumber(s, K);
        const WavefunctionState recon = simulate_tomography(post.state, K, budget.n_c, rng);
        const auto phase = phase_readout(recon, g);
        const GridFunction estimate{std::vector<double>(phase), L};

        rec.mspe = mspe(estimate, target);
        rec.err_a_sq = post.delta_ps_sq;
        const double fid_qt = std::norm(state_overlap(post.state, recon));
        rec.err_b_sq = std::numbers::pi * std::numbers::pi * (1.0 - fid_qt);
        rec.particles_used = budget.N;
        if (rec.mspe > rec.err_a_sq + rec.err_b_sq + 1e-9) rec.flags |= kFlagPrecondition;
        return rec;
    }

    // Entangled regime: level cascade with 2^n-body entanglement resolves
    // the 2pi/n_p ambiguity, reusing the probe-level repeat schedule.
    const int n0 = static_cast<int>(std::floor(std::log2(static_cast<double>(budget.n_p))));
    std::vector<std::vector<double>> level_phase(n0 + 1);
    double delta_ps_top = 0.0, delta_qt_top = 0.0;
    for (int n = 0; n <= n0; ++n) {
        const long long np_n = 1LL << n;
        const long long reps =
            static_cast<long long>(std::ceil(constants.c6 * (n0 + 1 - n)));
        std::vector<std::vector<double>> rep_phases;
        rep_phases.reserve(reps);
        const WavefunctionState s = output_state(target, np_n, k_full);
        Postselection post = project_low_wavenumber(s, K);
        for (long long r = 0; r < reps; ++r) {
            const WavefunctionState recon =
                simulate_tomography(post.state, K, budget.n_c, rng);
            rep_phases.push_back(phase_readout(recon, g));
            rec.particles_used += np_n * budget.n_c;
            if (n == n0) {
                const double fid_qt = std::norm(state_overlap(post.state, recon));
                delta_qt_top = std::numbers::pi * std::numbers::pi /
                               (static_cast<double>(np_n) * np_n) * (1.0 - fid_qt);
            }
        }
        if (n == n0) delta_ps_top = post.delta_ps_sq;
        // Per grid point, combine repeats by circular median of 2^n*phi.
        level_phase[n].resize(g);
        std::vector<double> angles(reps);
        for (int j = 0; j < g; ++j) {
            for (long long r = 0; r < reps; ++r) angles[r] = rep_phases[r][j];
            level_phase[n][j] = circular_median(angles);
        }
    }

    GridFunction estimate;
    estimate.length = L;
    estimate.values.resize(g);
    std::vector<double> mu(n0 + 1);
    bool any_degraded = false;
    for (int j = 0; j < g; ++j) {
        for (int n = 0; n <= n0; ++n) {
            double a = level_phase[n][j];
            if (a < 0.0) a += kTwoPi;
            mu[n] = a;
        }
        const RefineResult r = kitaev_refine(mu);
        estimate.values[j] = r.center;
        any_degraded = any_degraded || r.degraded;
    }
    if (any_degraded) rec.flags |= kFlagDegraded;

    rec.mspe = mspe(estimate, target);
    rec.err_a_sq = delta_ps_top;
    rec.err_b_sq = delta_qt_top;
    return rec;
}

}  // namespace qfn
